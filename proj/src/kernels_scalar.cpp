#include <cmath>

#include "lpcm/kernels.hpp"

namespace lpcm::kernels {
namespace {

void distances_scalar(const double* point, const double* soa, std::size_t stride, std::size_t dim,
                      std::size_t count, double* out) {
  for (std::size_t j = 0; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double diff = point[c] - soa[c * stride + j];
      acc += diff * diff;
    }
    out[j] = std::sqrt(acc);
  }
}

double dyad_loglik_scalar(const double* dist, const double* counts, std::size_t count, double beta,
                          double weight) {
  double linear = 0.0, soft = 0.0;
  for (std::size_t j = 0; j < count; ++j) {
    const double eta = beta - dist[j];
    linear += counts[j] * eta;
    soft += softplus(eta);
  }
  return linear - weight * soft;
}

}  // namespace

const DyadKernels& scalar_kernels() {
  static const DyadKernels k{Isa::scalar, "scalar", &distances_scalar, &dyad_loglik_scalar};
  return k;
}

}  // namespace lpcm::kernels
