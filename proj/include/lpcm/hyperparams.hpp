#pragma once

#include <cstddef>

namespace lpcm {

/// Prior hyperparameters plus sampler tuning constants.
///
/// Priors: beta ~ N(xi, psi); tau_g ~ Gamma(alpha/2, rate delta/2);
/// mu_g | tau_g ~ N_d(0, omega2/tau_g I); lambda ~ Dirichlet(nu); G ~ Poisson(1) on {1..g_max}.
struct Hyperparams {
  double xi = 0.0;
  double psi = 2.0;
  double alpha = 2.0;
  double delta = 0.103;
  double nu = 3.0;
  double omega2 = 10.0;
  int d = 2;
  int g_max = 0;  // 0 means floor(n/2), resolved by with_defaults_for()
  double sigma_z2 = 1.0;
  double sigma_beta2 = 1.0;
  double a_eject = 1.0;

  /// Fills g_max = max(1, floor(n/2)) when unset and validates.
  Hyperparams with_defaults_for(std::size_t n) const;

  /// Throws std::invalid_argument on any violated constraint.
  void validate() const;
};

}  // namespace lpcm
