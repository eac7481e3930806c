#include "lpcm/moves.hpp"

#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace lpcm::moves {

namespace {

double lgam(double x) { return boost::math::lgamma(x); }
double log_factorial(int k) { return lgam(k + 1.0); }

double gain(const LogTermCache& cache, const ClusterStats& s) {
  return cache.cluster_term(s) + cache.log_gamma_nu(s.count);
}

// Log acceptance ratio for splitting `merged` (cluster j1 at G components) into
// `stay` (keeps j1) and `fresh` (new label G).
double split_log_ratio(const LogTermCache& cache, const ClusterStats& merged, const ClusterStats& stay,
                       const ClusterStats& fresh, int num_clusters, double a, int g_max) {
  const double pe_before = eject_probability(num_clusters, g_max);
  const double pe_after = eject_probability(num_clusters + 1, g_max);
  if (pe_before <= 0.0) return -INFINITY;
  double value = gain(cache, stay) + gain(cache, fresh) - gain(cache, merged);
  value += cache.allocation_constant(num_clusters + 1) - cache.allocation_constant(num_clusters);
  value += std::log1p(-pe_after) - std::log(pe_before);
  value += 2.0 * lgam(a) - lgam(2.0 * a) + lgam(2.0 * a + merged.count) - lgam(a + stay.count) -
           lgam(a + fresh.count);
  return value;
}

ClusterStats merge(const ClusterStats& x, const ClusterStats& y) {
  ClusterStats m = x;
  m.count += y.count;
  for (std::size_t c = 0; c < m.sum.size(); ++c) m.sum[c] += y.sum[c];
  m.sum_sq += y.sum_sq;
  return m;
}

}  // namespace

double eject_probability(int num_clusters, int g_max) {
  if (num_clusters >= g_max) return 0.0;
  if (num_clusters <= 1) return 1.0;
  return 0.5;
}

std::vector<double> gibbs_log_weights(const ChainState& state, const LogTermCache& cache, std::size_t actor) {
  const int G = state.num_clusters();
  const auto z = state.z.row(actor);
  const int own = state.alloc[actor];
  std::vector<double> w(static_cast<std::size_t>(G));
  for (int g = 0; g < G; ++g) {
    ClusterStats without = state.clusters[static_cast<std::size_t>(g)];
    if (g == own) without.remove(z);
    ClusterStats with = without;
    with.add(z);
    w[static_cast<std::size_t>(g)] = gain(cache, with) - gain(cache, without);
  }
  return w;
}

double reassign_log_delta(const ChainState& state, const LogTermCache& cache, int j1, int j2,
                          std::span<const std::size_t> members, std::span<const int> new_labels) {
  if (members.size() != new_labels.size()) throw std::invalid_argument("members and labels differ in length");
  ClusterStats a = state.clusters[static_cast<std::size_t>(j1)];
  ClusterStats b = state.clusters[static_cast<std::size_t>(j2)];
  const double before = gain(cache, a) + gain(cache, b);
  for (std::size_t t = 0; t < members.size(); ++t) {
    const auto z = state.z.row(members[t]);
    const int from = state.alloc[members[t]];
    const int to = new_labels[t];
    if (from == to) continue;
    if (from == j1 && to == j2) {
      a.remove(z);
      b.add(z);
    } else if (from == j2 && to == j1) {
      b.remove(z);
      a.add(z);
    } else {
      throw std::invalid_argument("reassignment outside the two chosen clusters");
    }
  }
  return gain(cache, a) + gain(cache, b) - before;
}

double move1_log_proposal_ratio(int n1, int n2, int n1_new, int n2_new) {
  return log_factorial(n1) + log_factorial(n2) - log_factorial(n1_new) - log_factorial(n2_new);
}

double move2_log_proposal_ratio(int n_from, int n_to, int m) {
  return std::log(static_cast<double>(n_from)) - std::log(static_cast<double>(n_to + m)) + log_factorial(n_from) +
         log_factorial(n_to) - log_factorial(n_from - m) - log_factorial(n_to + m);
}

double sequential_first_probability(const ClusterStats& a, const ClusterStats& b, std::span<const double> z,
                                    const LogTermCache& cache) {
  ClusterStats a1 = a, b1 = b;
  a1.add(z);
  b1.add(z);
  const double la = gain(cache, a1) - gain(cache, a);
  const double lb = gain(cache, b1) - gain(cache, b);
  return 1.0 / (1.0 + std::exp(lb - la));
}

double move3_log_path_probability(const ChainState& state, const LogTermCache& cache, int j1, int j2,
                                  std::span<const std::size_t> order, std::span<const int> labels) {
  if (order.size() != labels.size()) throw std::invalid_argument("order and labels differ in length");
  ClusterStats a = state.clusters[static_cast<std::size_t>(j1)];
  ClusterStats b = state.clusters[static_cast<std::size_t>(j2)];
  for (std::size_t i : order) {
    const int k = state.alloc[i];
    if (k == j1)
      a.remove(state.z.row(i));
    else if (k == j2)
      b.remove(state.z.row(i));
    else
      throw std::invalid_argument("actor outside the two chosen clusters");
  }
  double logp = 0.0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const auto z = state.z.row(order[t]);
    const double p1 = sequential_first_probability(a, b, z, cache);
    if (labels[t] == j1) {
      logp += std::log(p1);
      a.add(z);
    } else {
      logp += std::log1p(-p1);
      b.add(z);
    }
  }
  return logp;
}

double eject_log_ratio(const ChainState& state, const LogTermCache& cache, int j1,
                       std::span<const std::size_t> moved, double a, int g_max) {
  const auto& merged = state.clusters[static_cast<std::size_t>(j1)];
  ClusterStats stay = merged;
  ClusterStats fresh(state.z.dim());
  for (std::size_t i : moved) {
    if (state.alloc[i] != j1) throw std::invalid_argument("ejected actor is not in the source cluster");
    stay.remove(state.z.row(i));
    fresh.add(state.z.row(i));
  }
  return split_log_ratio(cache, merged, stay, fresh, state.num_clusters(), a, g_max);
}

double absorb_log_ratio(const ChainState& state, const LogTermCache& cache, int j1, double a, int g_max) {
  const int G = state.num_clusters();
  if (G < 2 || j1 < 0 || j1 >= G - 1) throw std::invalid_argument("absorb needs a target below the last label");
  const auto& stay = state.clusters[static_cast<std::size_t>(j1)];
  const auto& fresh = state.clusters[static_cast<std::size_t>(G - 1)];
  return -split_log_ratio(cache, merge(stay, fresh), stay, fresh, G - 1, a, g_max);
}

}  // namespace lpcm::moves
