#pragma once

// Log-density terms of the collapsed latent position cluster model.
//
// With cluster means, precisions and mixing weights integrated out, the
// posterior over (Z, beta, K, G) factorises into
//
//   log_likelihood(Y | Z, beta)
//   + sum_g log_cluster_term(n_g, s_g, q_g)
//   + log_allocation_terms(K, G)       (Dirichlet-multinomial, G-dependent constants, Poisson(1))
//   + log_beta_prior(beta)
//   - (d n / 2) log(pi)
//
// where s_g and q_g are the sum and the sum of squared norms of the positions in cluster g.

#include <cstddef>
#include <span>
#include <vector>

#include "lpcm/hyperparams.hpp"
#include "lpcm/kernels.hpp"
#include "lpcm/network.hpp"
#include "lpcm/positions.hpp"

namespace lpcm {

/// Slack allowed on the positivity of delta + q - |s|^2 / (n + 1/omega2).
inline constexpr double kScaleSlack = 1e-12;

/// Sufficient statistics of one cluster: member count, coordinate sum, sum of squared norms.
struct ClusterStats {
  int count = 0;
  std::vector<double> sum;
  double sum_sq = 0.0;

  ClusterStats() = default;
  explicit ClusterStats(std::size_t d) : sum(d, 0.0) {}

  void add(std::span<const double> z);
  /// Throws std::logic_error when the cluster is empty.
  void remove(std::span<const double> z);
};

/// Current sampler state. Labels are 0-based; clusters.size() is G.
struct ChainState {
  Positions z;
  double beta = 0.0;
  std::vector<int> alloc;
  std::vector<ClusterStats> clusters;

  int num_clusters() const noexcept { return static_cast<int>(clusters.size()); }
  std::size_t num_actors() const noexcept { return alloc.size(); }

  /// Rebuilds the per-cluster statistics from z and alloc for G clusters.
  void rebuild_stats(int num_clusters);

  /// Largest relative deviation between the incremental stats and a from-scratch recompute.
  double stats_drift() const;

  std::vector<int> cluster_sizes() const;
};

ChainState make_state(Positions z, double beta, std::vector<int> alloc, int num_clusters);

/// Sum over dyads of y_ij eta_ij - log(1 + exp(eta_ij)), eta_ij = beta - |z_i - z_j|.
/// Directed networks use ordered pairs, undirected networks unordered pairs.
double log_likelihood(const Network& net, const Positions& z, double beta,
                      const kernels::DyadKernels& kern = kernels::scalar_kernels());

/// lnG((n d + a)/2) - (d/2) ln(n + 1/w2) - ((n d + a)/2) ln(delta + q - |s|^2/(n + 1/w2)).
/// Throws NumericError when the scale term is non-positive beyond kScaleSlack.
double log_cluster_term(const ClusterStats& stats, const Hyperparams& hp);

/// Dirichlet-multinomial, G-dependent constants and the Poisson(1) prior on G
/// (truncation constant dropped).
double log_allocation_terms(std::span<const int> alloc, int num_clusters, const Hyperparams& hp);

double log_beta_prior(double beta, const Hyperparams& hp);

/// Full unnormalised log posterior of (Z, beta, K, G).
double log_collapsed_posterior(const ChainState& state, const Network& net, const Hyperparams& hp,
                               const kernels::DyadKernels& kern = kernels::scalar_kernels());

/// Lookup tables for the count-dependent pieces used in the sampler's hot loops.
class LogTermCache {
public:
  LogTermCache(const Hyperparams& hp, std::size_t n);

  const Hyperparams& hp() const noexcept { return hp_; }

  double cluster_term(int count, std::span<const double> sum, double sum_sq) const;
  double cluster_term(const ClusterStats& s) const { return cluster_term(s.count, s.sum, s.sum_sq); }

  /// lnG(count + nu)
  double log_gamma_nu(int count) const { return lg_nu_[count]; }

  /// Part of log_allocation_terms that depends on G only (everything but sum_g lnG(n_g + nu)).
  double allocation_constant(int num_clusters) const;

  std::size_t actors() const noexcept { return n_; }

private:
  Hyperparams hp_;
  std::size_t n_;
  std::vector<double> lg_shape_;  // lnG((n d + alpha)/2)
  std::vector<double> log_prec_;  // ln(n + 1/omega2)
  std::vector<double> lg_nu_;     // lnG(n + nu)
};

}  // namespace lpcm
