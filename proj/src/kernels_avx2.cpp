#include <immintrin.h>

#include <cmath>

#include "lpcm/kernels.hpp"

namespace lpcm::kernels {
namespace {

// exp(x) for x in [-708, 0]: x = k ln2 + r, |r| <= ln2/2, Taylor series of
// degree 13 for e^r (truncation < 5e-18 relative), then scale by 2^k.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  x = _mm256_max_pd(x, _mm256_set1_pd(-708.0));
  const __m256d k = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, x);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);

  static constexpr double inv_fact[] = {
      1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0, 1.0 / 362880.0,
      1.0 / 40320.0,      1.0 / 5040.0,      1.0 / 720.0,      1.0 / 120.0,     1.0 / 24.0,
      1.0 / 6.0,          0.5,               1.0,              1.0};
  __m256d p = _mm256_set1_pd(inv_fact[0]);
  for (int i = 1; i < 14; ++i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(inv_fact[i]));

  const __m128i k32 = _mm256_cvtpd_epi32(k);
  __m256i bits = _mm256_cvtepi32_epi64(k32);
  bits = _mm256_add_epi64(bits, _mm256_set1_epi64x(1023));
  bits = _mm256_slli_epi64(bits, 52);
  return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// log1p(u) for u in [0, 1]. v = 1 + u is split as m * 2^e with m in [sqrt(1/2), sqrt(2)),
// log(m) = 2 atanh(f / (2 + f)) summed to s^23, and the rounding of 1 + u is
// corrected to first order by (u - (v - 1)) / v.
inline __m256d log1p_unit(__m256d u) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d v = _mm256_add_pd(one, u);
  const __m256d correction = _mm256_div_pd(_mm256_sub_pd(u, _mm256_sub_pd(v, one)), v);

  const __m256d big = _mm256_cmp_pd(v, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  const __m256d m = _mm256_blendv_pd(v, _mm256_mul_pd(v, _mm256_set1_pd(0.5)), big);
  const __m256d e = _mm256_and_pd(big, one);

  const __m256d f = _mm256_sub_pd(m, one);
  const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 23.0);
  for (int k = 21; k >= 1; k -= 2) poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / k));
  const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), poly);

  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  const __m256d low = _mm256_fmadd_pd(e, ln2_lo, _mm256_add_pd(log_m, correction));
  return _mm256_fmadd_pd(e, ln2_hi, low);
}

inline __m256d softplus_pd(__m256d x) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d neg_abs = _mm256_min_pd(x, _mm256_sub_pd(zero, x));
  return _mm256_add_pd(_mm256_max_pd(x, zero), log1p_unit(exp_nonpositive(neg_abs)));
}

// Kept local: the header's inline softplus must not be instantiated with AVX2 codegen.
double softplus_tail(double x) { return (x > 0.0 ? x : 0.0) + std::log1p(std::exp(-std::fabs(x))); }

inline double horizontal_sum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

void distances_avx2(const double* point, const double* soa, std::size_t stride, std::size_t dim,
                    std::size_t count, double* out) {
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t c = 0; c < dim; ++c) {
      const __m256d diff = _mm256_sub_pd(_mm256_set1_pd(point[c]), _mm256_loadu_pd(soa + c * stride + j));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + j, _mm256_sqrt_pd(acc));
  }
  for (; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t c = 0; c < dim; ++c) {
      const double diff = point[c] - soa[c * stride + j];
      acc += diff * diff;
    }
    out[j] = std::sqrt(acc);
  }
}

double dyad_loglik_avx2(const double* dist, const double* counts, std::size_t count, double beta,
                        double weight) {
  const __m256d b = _mm256_set1_pd(beta);
  __m256d linear = _mm256_setzero_pd(), soft = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    const __m256d eta = _mm256_sub_pd(b, _mm256_loadu_pd(dist + j));
    linear = _mm256_fmadd_pd(_mm256_loadu_pd(counts + j), eta, linear);
    soft = _mm256_add_pd(soft, softplus_pd(eta));
  }
  double lin = horizontal_sum(linear), sp = horizontal_sum(soft);
  for (; j < count; ++j) {
    const double eta = beta - dist[j];
    lin += counts[j] * eta;
    sp += softplus_tail(eta);
  }
  return lin - weight * sp;
}

}  // namespace

const DyadKernels& avx2_kernels() {
  static const DyadKernels k{Isa::avx2, "avx2", &distances_avx2, &dyad_loglik_avx2};
  return k;
}

}  // namespace lpcm::kernels
