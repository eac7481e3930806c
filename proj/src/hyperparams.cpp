#include "lpcm/hyperparams.hpp"

#include <stdexcept>
#include <string>

namespace lpcm {

Hyperparams Hyperparams::with_defaults_for(std::size_t n) const {
  Hyperparams hp = *this;
  if (hp.g_max == 0) hp.g_max = n >= 2 ? static_cast<int>(n / 2) : 1;
  hp.validate();
  return hp;
}

void Hyperparams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
  };
  positive(psi, "psi");
  positive(alpha, "alpha");
  positive(delta, "delta");
  positive(nu, "nu");
  positive(omega2, "omega2");
  positive(sigma_z2, "sigma_z2");
  positive(sigma_beta2, "sigma_beta2");
  positive(a_eject, "a_eject");
  if (d < 1) throw std::invalid_argument("latent dimension d must be at least 1");
  if (g_max < 1) throw std::invalid_argument("g_max must be at least 1");
}

}  // namespace lpcm
