#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lpcm/network.hpp"
#include "lpcm/positions.hpp"
#include "lpcm/sampler.hpp"

namespace lpcm {

/// Conditioning positions for the two-stage BIC: the aligned draw with the
/// largest log-likelihood (a stand-in for the minimum-KL estimate).
Positions point_estimate_positions(std::span<const DrawRecord> draws);

struct LogisticFit {
  double beta_hat = 0.0;
  double loglik = 0.0;
  double bic = 0.0;  // 2 logL(beta_hat) - ln(n_lr)
  std::size_t n_lr = 0;
  int newton_iterations = 0;
};

/// Newton maximisation of the log-likelihood in beta with Z fixed.
/// Throws NumericError when there are no ties or no non-ties (boundary MLE) or on non-convergence.
LogisticFit bic_lr(const Network& net, const Positions& z_hat);

struct MixtureFit {
  int num_clusters = 0;
  std::vector<double> weights;
  Positions means;                 // G x d
  std::vector<double> variances;   // spherical, per component
  double loglik = 0.0;
  double bic = 0.0;                // 2 logL - d_lp ln(n)
  int parameters = 0;              // d_lp = G(d + 2) - 1
  int iterations = 0;
  std::vector<double> responsibilities;  // n x G
  std::vector<double> loglik_trace;      // best restart's EM trace
};

struct MixtureOptions {
  int restarts = 10;
  int max_iterations = 500;
  double tolerance = 1e-8;
  double min_variance = 1e-8;
  std::uint64_t seed = 12345;
};

/// EM for a G-component spherical Gaussian mixture on the rows of z, best of
/// k-means-seeded restarts. Throws NumericError when every restart collapses.
MixtureFit bic_lp(const Positions& z, int num_clusters, const MixtureOptions& opts = {});

struct BicEntry {
  int num_clusters = 0;
  double bic_lr = 0.0;
  double bic_lp = 0.0;
  double total = 0.0;  // bic_lr + bic_lp (larger is better)
  double bic = 0.0;    // -(bic_lr + bic_lp), reported; smaller is better
  LogisticFit lr;
  MixtureFit lp;
};

std::vector<BicEntry> bic_reports(const Network& net, const Positions& z_hat, int g_cap,
                                  const MixtureOptions& opts = {});

/// G with the smallest reported BIC; ties go to the smaller G.
int select_model(std::span<const BicEntry> reports);

}  // namespace lpcm
