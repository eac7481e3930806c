#include "lpcm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "lpcm/moves.hpp"

namespace lpcm {

const char* move_name(Move m) {
  switch (m) {
    case Move::beta: return "beta";
    case Move::positions: return "Z";
    case Move::gibbs: return "gibbs_K";
    case Move::move1: return "move1";
    case Move::move2: return "move2";
    case Move::move3: return "move3";
    case Move::eject: return "eject";
    case Move::absorb: return "absorb";
  }
  return "?";
}

double MoveCounters::rate(Move m) const {
  const auto a = attempts(m);
  return a == 0 ? NAN : static_cast<double>(accepts(m)) / static_cast<double>(a);
}

MoveCounters& MoveCounters::operator+=(const MoveCounters& o) {
  for (std::size_t k = 0; k < kMoveKinds; ++k) {
    attempted[k] += o.attempted[k];
    accepted[k] += o.accepted[k];
    unchanged[k] += o.unchanged[k];
  }
  return *this;
}

ChainState initial_state(const Network& net, const Hyperparams& hp, Rng& rng) {
  const std::size_t n = net.size();
  const auto d = static_cast<std::size_t>(hp.d);
  Positions z(n, d);
  for (double& v : z.data()) v = rng.normal(0.0, 2.0);
  const double beta = rng.normal(hp.xi, std::sqrt(hp.psi));
  return make_state(std::move(z), beta, std::vector<int>(n, 0), 1);
}

Sampler::Sampler(const Network& net, const Hyperparams& hp, ChainState init, Rng rng,
                 const kernels::DyadKernels& kern)
    : net_(&net),
      hp_(hp.with_defaults_for(net.size())),
      state_(std::move(init)),
      rng_(rng),
      kern_(&kern),
      cache_(hp_, net.size()),
      n_(net.size()),
      d_(static_cast<std::size_t>(hp_.d)) {
  if (n_ < 2) throw std::invalid_argument("the network needs at least two actors");
  if (state_.z.rows() != n_ || state_.z.dim() != d_)
    throw std::invalid_argument("initial positions do not match the network size and latent dimension");
  if (state_.num_clusters() < 1 || state_.num_clusters() > hp_.g_max)
    throw std::invalid_argument("initial G outside [1, g_max]");
  state_.rebuild_stats(state_.num_clusters());
  soa_.assign(n_ * d_, 0.0);
  dist_.assign(n_ * n_, 0.0);
  scratch_.assign(n_, 0.0);
  proposal_.assign(d_, 0.0);
  refresh_geometry();
}

void Sampler::set_network(const Network& net) {
  if (net.size() != n_) throw std::invalid_argument("replacement network has a different actor count");
  net_ = &net;
}

void Sampler::refresh_geometry() {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t c = 0; c < d_; ++c) soa_[c * n_ + i] = state_.z(i, c);
  for (std::size_t i = 0; i < n_; ++i) kern_->distances(state_.z.row(i).data(), soa_.data(), n_, d_, n_, &dist_[i * n_]);
}

double Sampler::row_loglik(std::size_t i, const double* dist) const {
  const double* counts = net_->dyad_counts(i).data();
  const double w = net_->dyad_weight();
  const double beta = state_.beta;
  double total = kern_->dyad_loglik(dist, counts, i, beta, w);
  total += kern_->dyad_loglik(dist + i + 1, counts + i + 1, n_ - i - 1, beta, w);
  return total;
}

double Sampler::log_likelihood() const {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n_; ++i)
    total += kern_->dyad_loglik(&dist_[i * n_ + i + 1], net_->dyad_counts(i).data() + i + 1, n_ - i - 1,
                                state_.beta, net_->dyad_weight());
  return total;
}

double Sampler::log_posterior() const {
  double value = log_likelihood();
  for (const auto& c : state_.clusters) value += cache_.cluster_term(c);
  value += log_allocation_terms(state_.alloc, state_.num_clusters(), hp_);
  value += log_beta_prior(state_.beta, hp_);
  value -= 0.5 * static_cast<double>(d_ * n_) * std::log(std::numbers::pi);
  return value;
}

bool Sampler::accept(double log_ratio) {
  const double u = rng_.uniform();
  if (hooks_.force_reject) return false;
  return std::log(u) < log_ratio;
}

void Sampler::update_positions() {
  const double sd = std::sqrt(hp_.sigma_z2);
  for (std::size_t i = 0; i < n_; ++i) {
    counters_.attempt(Move::positions);
    auto zi = state_.z.row(i);
    for (std::size_t c = 0; c < d_; ++c) {
      const double step = rng_.normal(0.0, sd);
      proposal_[c] = hooks_.zero_step ? zi[c] : zi[c] + step;
    }
    kern_->distances(proposal_.data(), soa_.data(), n_, d_, n_, scratch_.data());
    const double ll_old = row_loglik(i, &dist_[i * n_]);
    const double ll_new = row_loglik(i, scratch_.data());

    auto& stats = state_.clusters[static_cast<std::size_t>(state_.alloc[i])];
    const double prior_old = cache_.cluster_term(stats);
    ClusterStats moved = stats;
    moved.remove(zi);
    moved.add(proposal_);
    const double prior_new = cache_.cluster_term(moved);

    if (!accept(ll_new - ll_old + prior_new - prior_old)) continue;
    counters_.accept(Move::positions);
    stats = std::move(moved);
    std::copy(proposal_.begin(), proposal_.end(), zi.begin());
    for (std::size_t c = 0; c < d_; ++c) soa_[c * n_ + i] = proposal_[c];
    scratch_[i] = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      dist_[i * n_ + j] = scratch_[j];
      dist_[j * n_ + i] = scratch_[j];
    }
  }
}

void Sampler::update_intercept() {
  counters_.attempt(Move::beta);
  const double current = state_.beta;
  const double proposed = rng_.normal(current, std::sqrt(hp_.sigma_beta2));
  const double ll_old = log_likelihood();
  state_.beta = proposed;
  const double ll_new = log_likelihood();
  state_.beta = current;
  const double log_ratio = ll_new - ll_old + log_beta_prior(proposed, hp_) - log_beta_prior(current, hp_);
  if (!accept(log_ratio)) return;
  counters_.accept(Move::beta);
  state_.beta = proposed;
}

void Sampler::gibbs_allocations() {
  const int G = state_.num_clusters();
  std::vector<double> logw(static_cast<std::size_t>(G));
  std::vector<double> sum(d_);
  for (std::size_t i = 0; i < n_; ++i) {
    counters_.attempt(Move::gibbs);
    const auto zi = state_.z.row(i);
    const int old = state_.alloc[i];
    state_.clusters[static_cast<std::size_t>(old)].remove(zi);
    double zz = 0.0;
    for (double v : zi) zz += v * v;
    double top = -INFINITY;
    for (int g = 0; g < G; ++g) {
      const auto& s = state_.clusters[static_cast<std::size_t>(g)];
      for (std::size_t c = 0; c < d_; ++c) sum[c] = s.sum[c] + zi[c];
      const double with = cache_.cluster_term(s.count + 1, sum, s.sum_sq + zz) + cache_.log_gamma_nu(s.count + 1);
      const double without = cache_.cluster_term(s) + cache_.log_gamma_nu(s.count);
      logw[static_cast<std::size_t>(g)] = with - without;
      top = std::max(top, with - without);
    }
    double total = 0.0;
    for (double& w : logw) {
      w = std::exp(w - top);
      total += w;
    }
    const double u = rng_.uniform() * total;
    int chosen = G - 1;
    double acc = 0.0;
    for (int g = 0; g < G; ++g) {
      acc += logw[static_cast<std::size_t>(g)];
      if (u < acc) {
        chosen = g;
        break;
      }
    }
    state_.clusters[static_cast<std::size_t>(chosen)].add(zi);
    state_.alloc[i] = chosen;
    if (chosen != old)
      counters_.accept(Move::gibbs);
    else
      counters_.keep(Move::gibbs);
  }
}

std::vector<std::size_t> Sampler::members_of(int j1, int j2) const {
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < n_; ++i)
    if (state_.alloc[i] == j1 || state_.alloc[i] == j2) members.push_back(i);
  return members;
}

void Sampler::assign(std::size_t actor, int label) {
  const int from = state_.alloc[actor];
  if (from == label) return;
  const auto z = state_.z.row(actor);
  state_.clusters[static_cast<std::size_t>(from)].remove(z);
  state_.clusters[static_cast<std::size_t>(label)].add(z);
  state_.alloc[actor] = label;
}

bool Sampler::try_reassign(Move kind, int j1, int j2, const std::vector<std::size_t>& members,
                           const std::vector<int>& labels, double log_proposal) {
  const double delta = moves::reassign_log_delta(state_, cache_, j1, j2, members, labels);
  if (!accept(delta + log_proposal)) return false;
  // The partition is unchanged when nothing moves, or when j1 and j2 trade all their members.
  const auto n1 = state_.clusters[static_cast<std::size_t>(j1)].count;
  const auto n2 = state_.clusters[static_cast<std::size_t>(j2)].count;
  const bool covers = members.size() == static_cast<std::size_t>(n1 + n2);
  bool same = true, swapped = covers;
  for (std::size_t t = 0; t < members.size(); ++t) {
    const int k = state_.alloc[members[t]];
    same = same && k == labels[t];
    swapped = swapped && (k == j1 ? j2 : j1) == labels[t];
  }
  if (!covers && n2 == 0 && members.size() == static_cast<std::size_t>(n1)) swapped = true;
  const bool changed = !same && !swapped;
  if (changed)
    counters_.accept(kind);
  else
    counters_.keep(kind);
  for (std::size_t t = 0; t < members.size(); ++t) assign(members[t], labels[t]);
  return true;
}

namespace {

std::pair<int, int> distinct_pair(Rng& rng, int G) {
  const int j1 = rng.uniform_int(0, G - 1);
  int j2 = rng.uniform_int(0, G - 2);
  if (j2 >= j1) ++j2;
  return {j1, j2};
}

}  // namespace

void Sampler::move1() {
  const int G = state_.num_clusters();
  if (G < 2) return;
  counters_.attempt(Move::move1);
  const auto [j1, j2] = distinct_pair(rng_, G);
  const double p = rng_.uniform();
  const auto members = members_of(j1, j2);
  std::vector<int> labels(members.size());
  int n1_new = 0;
  for (auto& k : labels) {
    k = rng_.uniform() < p ? j1 : j2;
    if (k == j1) ++n1_new;
  }
  const int n1 = state_.clusters[static_cast<std::size_t>(j1)].count;
  const int n2 = state_.clusters[static_cast<std::size_t>(j2)].count;
  const int n2_new = static_cast<int>(members.size()) - n1_new;
  try_reassign(Move::move1, j1, j2, members, labels, moves::move1_log_proposal_ratio(n1, n2, n1_new, n2_new));
}

void Sampler::move2() {
  const int G = state_.num_clusters();
  if (G < 2) return;
  counters_.attempt(Move::move2);
  const auto [j1, j2] = distinct_pair(rng_, G);
  const int n1 = state_.clusters[static_cast<std::size_t>(j1)].count;
  if (n1 == 0) return;
  const int n2 = state_.clusters[static_cast<std::size_t>(j2)].count;
  const int m = rng_.uniform_int(1, n1);
  std::vector<std::size_t> pool = members_of(j1, j1);
  for (int t = 0; t < m; ++t) {
    const int r = rng_.uniform_int(t, n1 - 1);
    std::swap(pool[static_cast<std::size_t>(t)], pool[static_cast<std::size_t>(r)]);
  }
  pool.resize(static_cast<std::size_t>(m));
  const std::vector<int> labels(pool.size(), j2);
  try_reassign(Move::move2, j1, j2, pool, labels, moves::move2_log_proposal_ratio(n1, n2, m));
}

void Sampler::move3() {
  const int G = state_.num_clusters();
  if (G < 2) return;
  counters_.attempt(Move::move3);
  const auto [j1, j2] = distinct_pair(rng_, G);
  auto order = members_of(j1, j2);
  for (std::size_t t = order.size(); t > 1; --t) {
    const auto r = static_cast<std::size_t>(rng_.uniform_int(0, static_cast<int>(t) - 1));
    std::swap(order[t - 1], order[r]);
  }
  ClusterStats a(d_), b(d_);
  std::vector<int> labels(order.size()), original(order.size());
  double log_forward = 0.0;
  for (std::size_t t = 0; t < order.size(); ++t) {
    const auto z = state_.z.row(order[t]);
    original[t] = state_.alloc[order[t]];
    const double p1 = moves::sequential_first_probability(a, b, z, cache_);
    if (rng_.uniform() < p1) {
      labels[t] = j1;
      log_forward += std::log(p1);
      a.add(z);
    } else {
      labels[t] = j2;
      log_forward += std::log1p(-p1);
      b.add(z);
    }
  }
  const double log_reverse = moves::move3_log_path_probability(state_, cache_, j1, j2, order, original);
  try_reassign(Move::move3, j1, j2, order, labels, log_reverse - log_forward);
}

void Sampler::eject_or_absorb() {
  const double pe = moves::eject_probability(state_.num_clusters(), hp_.g_max);
  bool do_eject;
  if (pe >= 1.0)
    do_eject = true;
  else if (pe <= 0.0)
    do_eject = false;
  else
    do_eject = rng_.uniform() < pe;
  if (do_eject)
    eject();
  else if (state_.num_clusters() >= 2)
    absorb();
}

bool Sampler::eject() {
  const int G = state_.num_clusters();
  if (G >= hp_.g_max) return false;
  counters_.attempt(Move::eject);
  const int j1 = rng_.uniform_int(0, G - 1);
  const double p = rng_.beta(hp_.a_eject, hp_.a_eject);
  std::vector<std::size_t> moved;
  for (std::size_t i = 0; i < n_; ++i)
    if (state_.alloc[i] == j1 && !(rng_.uniform() < p)) moved.push_back(i);
  const double log_ratio = moves::eject_log_ratio(state_, cache_, j1, moved, hp_.a_eject, hp_.g_max);
  if (!accept(log_ratio)) return false;
  counters_.accept(Move::eject);
  state_.clusters.emplace_back(d_);
  for (std::size_t i : moved) assign(i, G);
  return true;
}

bool Sampler::absorb() {
  const int G = state_.num_clusters();
  if (G < 2) return false;
  counters_.attempt(Move::absorb);
  const int j1 = rng_.uniform_int(0, G - 2);
  const double log_ratio = moves::absorb_log_ratio(state_, cache_, j1, hp_.a_eject, hp_.g_max);
  if (!accept(log_ratio)) return false;
  counters_.accept(Move::absorb);
  for (std::size_t i = 0; i < n_; ++i)
    if (state_.alloc[i] == G - 1) assign(i, j1);
  state_.clusters.pop_back();
  return true;
}

void Sampler::sweep() {
  update_positions();
  update_intercept();
  gibbs_allocations();
  move1();
  move2();
  move3();
  eject_or_absorb();
}

void RunConfig::validate() const {
  if (iterations < 1) throw std::invalid_argument("iterations must be at least 1");
  if (burnin < 0 || burnin > iterations) throw std::invalid_argument("burnin must lie in [0, iterations]");
  if (thin < 1) throw std::invalid_argument("thin must be at least 1");
}

ChainResult run_chain(const Network& net, const Hyperparams& hp, const RunConfig& cfg, const ProgressFn& progress,
                      std::uint64_t stream) {
  cfg.validate();
  const Hyperparams resolved = hp.with_defaults_for(net.size());
  Rng rng(cfg.seed, stream);
  ChainState init = initial_state(net, resolved, rng);
  Sampler sampler(net, resolved, std::move(init), rng, kernels::kernels_by_name(cfg.kernel));

  ChainResult result;
  const long kept = (cfg.iterations - cfg.burnin) / cfg.thin;
  result.draws.reserve(static_cast<std::size_t>(kept));
  for (long t = 1; t <= cfg.iterations; ++t) {
    sampler.sweep();
    if (t > cfg.burnin && (t - cfg.burnin) % cfg.thin == 0) {
      const auto& s = sampler.state();
      DrawRecord rec;
      rec.iter = t;
      rec.num_clusters = s.num_clusters();
      rec.beta = s.beta;
      rec.loglik = sampler.log_likelihood();
      rec.logpost = sampler.log_posterior();
      rec.alloc = s.alloc;
      rec.z = s.z;
      result.draws.push_back(std::move(rec));
    }
    if (progress && (t % 1000 == 0 || t == cfg.iterations)) progress(t, cfg.iterations);
  }
  result.counters = sampler.counters();
  result.final_state = sampler.state();
  return result;
}

}  // namespace lpcm
