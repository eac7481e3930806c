#include "lpcm/kernels.hpp"

#include <stdexcept>

namespace lpcm::kernels {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

const DyadKernels& best_kernels() { return cpu_has_avx2() ? avx2_kernels() : scalar_kernels(); }

const DyadKernels& kernels_by_name(const std::string& name) {
  if (name == "auto") return best_kernels();
  if (name == "scalar") return scalar_kernels();
  if (name == "avx2") {
    if (!cpu_has_avx2()) throw std::invalid_argument("avx2 kernels requested but the CPU lacks AVX2/FMA");
    return avx2_kernels();
  }
  throw std::invalid_argument("unknown kernel variant '" + name + "'");
}

}  // namespace lpcm::kernels
