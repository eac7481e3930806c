#include "lpcm/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "lpcm/errors.hpp"

namespace lpcm {

namespace {

double lgam(double x) { return boost::math::lgamma(x); }

double cluster_term_impl(int count, std::span<const double> sum, double sum_sq, double lg_shape,
                         double log_prec, const Hyperparams& hp) {
  const double prec = count + 1.0 / hp.omega2;
  double norm2 = 0.0;
  for (double s : sum) norm2 += s * s;
  double scale = hp.delta + sum_sq - norm2 / prec;
  if (scale <= 0.0) {
    if (scale < -kScaleSlack || hp.delta + kScaleSlack <= 0.0)
      throw NumericError("collapsed scale term is not positive (corrupted cluster statistics)");
    scale = kScaleSlack;
  }
  const double shape = 0.5 * (count * static_cast<double>(hp.d) + hp.alpha);
  return lg_shape - 0.5 * hp.d * log_prec - shape * std::log(scale);
}

}  // namespace

void ClusterStats::add(std::span<const double> z) {
  if (sum.size() != z.size()) sum.resize(z.size(), 0.0);
  ++count;
  for (std::size_t c = 0; c < z.size(); ++c) {
    sum[c] += z[c];
    sum_sq += z[c] * z[c];
  }
}

void ClusterStats::remove(std::span<const double> z) {
  if (count <= 0) throw std::logic_error("remove from an empty cluster");
  --count;
  for (std::size_t c = 0; c < z.size(); ++c) {
    sum[c] -= z[c];
    sum_sq -= z[c] * z[c];
  }
  if (count == 0) {
    std::fill(sum.begin(), sum.end(), 0.0);
    sum_sq = 0.0;
  }
}

void ChainState::rebuild_stats(int num_clusters) {
  clusters.assign(static_cast<std::size_t>(num_clusters), ClusterStats(z.dim()));
  for (std::size_t i = 0; i < alloc.size(); ++i) {
    if (alloc[i] < 0 || alloc[i] >= num_clusters) throw std::invalid_argument("allocation label out of range");
    clusters[static_cast<std::size_t>(alloc[i])].add(z.row(i));
  }
}

double ChainState::stats_drift() const {
  ChainState fresh;
  fresh.z = z;
  fresh.alloc = alloc;
  fresh.rebuild_stats(num_clusters());
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); };
  for (std::size_t g = 0; g < clusters.size(); ++g) {
    const auto& a = clusters[g];
    const auto& b = fresh.clusters[g];
    if (a.count != b.count) return INFINITY;
    worst = std::max(worst, rel(a.sum_sq, b.sum_sq));
    for (std::size_t c = 0; c < b.sum.size(); ++c) worst = std::max(worst, rel(a.sum[c], b.sum[c]));
  }
  return worst;
}

std::vector<int> ChainState::cluster_sizes() const {
  std::vector<int> sizes;
  sizes.reserve(clusters.size());
  for (const auto& c : clusters) sizes.push_back(c.count);
  return sizes;
}

ChainState make_state(Positions z, double beta, std::vector<int> alloc, int num_clusters) {
  if (alloc.size() != z.rows()) throw std::invalid_argument("allocation length differs from actor count");
  ChainState s;
  s.z = std::move(z);
  s.beta = beta;
  s.alloc = std::move(alloc);
  s.rebuild_stats(num_clusters);
  return s;
}

double log_likelihood(const Network& net, const Positions& z, double beta, const kernels::DyadKernels& kern) {
  const std::size_t n = net.size();
  if (z.rows() != n) throw std::invalid_argument("positions have " + std::to_string(z.rows()) +
                                                 " rows but the network has " + std::to_string(n) + " actors");
  if (z.dim() == 0) throw std::invalid_argument("positions have zero columns");
  const std::size_t d = z.dim();
  std::vector<double> soa(n * d), dist(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) soa[c * n + i] = z(i, c);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t m = n - i - 1;
    kern.distances(z.row(i).data(), soa.data() + i + 1, n, d, m, dist.data());
    total += kern.dyad_loglik(dist.data(), net.dyad_counts(i).data() + i + 1, m, beta, net.dyad_weight());
  }
  return total;
}

double log_cluster_term(const ClusterStats& stats, const Hyperparams& hp) {
  if (stats.count < 0) throw std::invalid_argument("negative cluster count");
  const double shape = 0.5 * (stats.count * static_cast<double>(hp.d) + hp.alpha);
  return cluster_term_impl(stats.count, stats.sum, stats.sum_sq, lgam(shape),
                           std::log(stats.count + 1.0 / hp.omega2), hp);
}

double log_allocation_terms(std::span<const int> alloc, int num_clusters, const Hyperparams& hp) {
  if (num_clusters < 1) throw std::invalid_argument("G must be at least 1");
  std::vector<int> counts(static_cast<std::size_t>(num_clusters), 0);
  for (int k : alloc) {
    if (k < 0 || k >= num_clusters) throw std::invalid_argument("allocation label out of range");
    ++counts[static_cast<std::size_t>(k)];
  }
  const double G = num_clusters;
  const double n = static_cast<double>(alloc.size());
  double value = lgam(G * hp.nu) - G * lgam(hp.nu) + 0.5 * G * hp.alpha * std::log(hp.delta) -
                 G * lgam(0.5 * hp.alpha) - 0.5 * G * hp.d * std::log(hp.omega2) - lgam(n + G * hp.nu) - 1.0 -
                 lgam(G + 1.0);
  // canonical order so the value is bit-identical under any relabeling
  std::sort(counts.begin(), counts.end());
  for (int c : counts) value += lgam(c + hp.nu);
  return value;
}

double log_beta_prior(double beta, const Hyperparams& hp) {
  const double dev = beta - hp.xi;
  return -0.5 * std::log(2.0 * std::numbers::pi * hp.psi) - dev * dev / (2.0 * hp.psi);
}

double log_collapsed_posterior(const ChainState& state, const Network& net, const Hyperparams& hp,
                               const kernels::DyadKernels& kern) {
  double value = log_likelihood(net, state.z, state.beta, kern);
  std::vector<double> terms;
  terms.reserve(state.clusters.size());
  for (const auto& c : state.clusters) terms.push_back(log_cluster_term(c, hp));
  std::sort(terms.begin(), terms.end());
  for (double t : terms) value += t;
  value += log_allocation_terms(state.alloc, state.num_clusters(), hp);
  value += log_beta_prior(state.beta, hp);
  value -= 0.5 * hp.d * static_cast<double>(state.num_actors()) * std::log(std::numbers::pi);
  return value;
}

LogTermCache::LogTermCache(const Hyperparams& hp, std::size_t n) : hp_(hp), n_(n) {
  lg_shape_.resize(n + 1);
  log_prec_.resize(n + 1);
  lg_nu_.resize(n + 1);
  for (std::size_t c = 0; c <= n; ++c) {
    lg_shape_[c] = lgam(0.5 * (static_cast<double>(c) * hp.d + hp.alpha));
    log_prec_[c] = std::log(static_cast<double>(c) + 1.0 / hp.omega2);
    lg_nu_[c] = lgam(static_cast<double>(c) + hp.nu);
  }
}

double LogTermCache::cluster_term(int count, std::span<const double> sum, double sum_sq) const {
  return cluster_term_impl(count, sum, sum_sq, lg_shape_[count], log_prec_[count], hp_);
}

double LogTermCache::allocation_constant(int num_clusters) const {
  const double G = num_clusters;
  return lgam(G * hp_.nu) - G * lgam(hp_.nu) + 0.5 * G * hp_.alpha * std::log(hp_.delta) -
         G * lgam(0.5 * hp_.alpha) - 0.5 * G * hp_.d * std::log(hp_.omega2) -
         lgam(static_cast<double>(n_) + G * hp_.nu) - 1.0 - lgam(G + 1.0);
}

}  // namespace lpcm
