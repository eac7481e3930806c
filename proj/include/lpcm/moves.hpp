#pragma once

// Acceptance ratios and proposal probabilities of the allocation moves.
//
// These are the single source of truth for every accept/reject decision on K
// and G: the Sampler calls them, and the exact transition-matrix tests call them
// on enumerated proposals.

#include <cstddef>
#include <span>
#include <vector>

#include "lpcm/density.hpp"

namespace lpcm::moves {

/// Probability of attempting an ejection at G components: 1 at G = 1, 0 at G = g_max, else 1/2.
double eject_probability(int num_clusters, int g_max);

/// Unnormalised log full-conditional weights of actor's label over g = 0..G-1
/// (the actor's current allocation is ignored).
std::vector<double> gibbs_log_weights(const ChainState& state, const LogTermCache& cache, std::size_t actor);

/// Change in sum_g [cluster term + lnG(n_g + nu)] when each members[t] (currently in j1 or j2)
/// is given new_labels[t] (j1 or j2).
double reassign_log_delta(const ChainState& state, const LogTermCache& cache, int j1, int j2,
                          std::span<const std::size_t> members, std::span<const int> new_labels);

/// log q(K'->K)/q(K->K') of the shared-p reallocation (p ~ Beta(1,1) integrated out):
/// ln(n1! n2!) - ln(n1'! n2'!).
double move1_log_proposal_ratio(int n1, int n2, int n1_new, int n2_new);

/// log of n_from/(n_to + m) * n_from! n_to! / ((n_from - m)! (n_to + m)!).
double move2_log_proposal_ratio(int n_from, int n_to, int m);

/// Probability of placing z in cluster a (vs b) given partial statistics a, b.
double sequential_first_probability(const ClusterStats& a, const ClusterStats& b, std::span<const double> z,
                                    const LogTermCache& cache);

/// log-probability that the sequential reallocation visiting `order` produces `labels`
/// (labels[t] in {j1, j2} for actor order[t]). Shells for j1, j2 start from the clusters'
/// statistics with every actor in `order` removed.
double move3_log_path_probability(const ChainState& state, const LogTermCache& cache, int j1, int j2,
                                  std::span<const std::size_t> order, std::span<const int> labels);

/// log acceptance ratio for ejecting `moved` (members of j1) into a new cluster labelled G.
double eject_log_ratio(const ChainState& state, const LogTermCache& cache, int j1,
                       std::span<const std::size_t> moved, double a, int g_max);

/// log acceptance ratio for absorbing the last cluster (label G-1) into j1 < G-1.
double absorb_log_ratio(const ChainState& state, const LogTermCache& cache, int j1, double a, int g_max);

}  // namespace lpcm::moves
