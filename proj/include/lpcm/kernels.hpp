#pragma once

#include <cmath>
#include <cstddef>
#include <string>

namespace lpcm::kernels {

// Data-parallel inner loops of the latent distance likelihood.
//
// Positions are passed structure-of-arrays: coordinate c of point j lives at
// soa[c * stride + j]. Every variant computes distances with the same operation
// order (sum of squared differences over coordinates, then sqrt), so distances
// are bit-identical across variants. The softplus sum differs between variants
// only by the rounding of the exp/log1p evaluation.

enum class Isa { scalar, avx2 };

struct DyadKernels {
  Isa isa;
  const char* name;

  /// out[j] = || point - soa[:, j] || for j in [0, count).
  void (*distances)(const double* point, const double* soa, std::size_t stride, std::size_t dim,
                    std::size_t count, double* out);

  /// sum_j counts[j] * eta_j - weight * log(1 + exp(eta_j)), eta_j = beta - dist[j].
  double (*dyad_loglik)(const double* dist, const double* counts, std::size_t count, double beta,
                        double weight);
};

const DyadKernels& scalar_kernels();
const DyadKernels& avx2_kernels();

/// True when the running CPU supports AVX2 and FMA.
bool cpu_has_avx2();

/// Best variant the running CPU supports.
const DyadKernels& best_kernels();

/// "scalar", "avx2" or "auto". Requesting avx2 on a CPU without it throws.
const DyadKernels& kernels_by_name(const std::string& name);

/// Numerically stable log(1 + exp(x)).
inline double softplus(double x) {
  return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::fabs(x)));
}

}  // namespace lpcm::kernels
