#include "lpcm/bic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "lpcm/density.hpp"
#include "lpcm/errors.hpp"
#include "lpcm/kernels.hpp"
#include "lpcm/postprocess.hpp"
#include "lpcm/rng.hpp"

namespace lpcm {

Positions point_estimate_positions(std::span<const DrawRecord> draws) {
  if (draws.empty()) throw std::invalid_argument("no draws to take a point estimate from");
  return draws[reference_draw(draws)].z;
}

namespace {

double logistic(double x) { return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x)); }

struct Dyads {
  std::vector<double> dist, count;
  double weight = 1.0;
};

Dyads collect_dyads(const Network& net, const Positions& z) {
  Dyads out;
  out.weight = net.dyad_weight();
  const std::size_t n = net.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < z.dim(); ++c) {
        const double diff = z(i, c) - z(j, c);
        s += diff * diff;
      }
      out.dist.push_back(std::sqrt(s));
      out.count.push_back(net.dyad_counts(i)[j]);
    }
  return out;
}

double dyad_loglik(const Dyads& dy, double beta) {
  double total = 0.0;
  for (std::size_t k = 0; k < dy.dist.size(); ++k) {
    const double eta = beta - dy.dist[k];
    total += dy.count[k] * eta - dy.weight * kernels::softplus(eta);
  }
  return total;
}

}  // namespace

LogisticFit bic_lr(const Network& net, const Positions& z_hat) {
  if (z_hat.rows() != net.size()) throw std::invalid_argument("positions do not match the network");
  const std::size_t ties = net.tie_count();
  const std::size_t n = net.size();
  const std::size_t trials = net.directed() ? n * (n - 1) : n * (n - 1) / 2;
  if (ties == 0) throw NumericError("no ties: the intercept MLE is at -infinity (boundary)");
  if (ties == trials) throw NumericError("complete graph: the intercept MLE is at +infinity (boundary)");

  const Dyads dy = collect_dyads(net, z_hat);
  double total_count = 0.0;
  for (double c : dy.count) total_count += c;

  LogisticFit fit;
  double beta = 0.0;
  for (const double dd : dy.dist) beta += dd;
  beta /= static_cast<double>(dy.dist.size());
  double grad = 0.0;
  int it = 0;
  for (; it < 100; ++it) {
    grad = total_count;
    double hess = 0.0;
    for (std::size_t k = 0; k < dy.dist.size(); ++k) {
      const double p = logistic(beta - dy.dist[k]);
      grad -= dy.weight * p;
      hess -= dy.weight * p * (1.0 - p);
    }
    if (std::fabs(grad) < 1e-10) break;
    double step = -grad / hess;
    const double current = dyad_loglik(dy, beta);
    // Newton on a concave function; halve if the full step overshoots.
    while (dyad_loglik(dy, beta + step) < current && std::fabs(step) > 1e-300) step *= 0.5;
    if (beta + step == beta) break;
    beta += step;
  }
  if (it == 100) throw NumericError(fmt::format("intercept Newton iteration did not converge (gradient {})", grad));
  fit.beta_hat = beta;
  fit.loglik = dyad_loglik(dy, beta);
  fit.n_lr = ties;
  fit.bic = 2.0 * fit.loglik - std::log(static_cast<double>(ties));
  fit.newton_iterations = it;
  return fit;
}

namespace {

struct EmRun {
  bool ok = false;
  MixtureFit fit;
};

double log_normal_spherical(std::span<const double> z, std::span<const double> mu, double var) {
  double sq = 0.0;
  for (std::size_t c = 0; c < z.size(); ++c) sq += (z[c] - mu[c]) * (z[c] - mu[c]);
  const double d = static_cast<double>(z.size());
  return -0.5 * d * std::log(2.0 * std::numbers::pi * var) - 0.5 * sq / var;
}

std::vector<int> kmeans(const Positions& z, int G, Rng& rng) {
  const std::size_t n = z.rows(), d = z.dim();
  Positions centres(static_cast<std::size_t>(G), d);
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  auto sqdist = [&](std::size_t i, std::span<const double> c) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += (z(i, k) - c[k]) * (z(i, k) - c[k]);
    return s;
  };
  // k-means++ seeding
  std::size_t first = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1));
  std::copy(z.row(first).begin(), z.row(first).end(), centres.row(0).begin());
  for (int g = 1; g < G; ++g) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], sqdist(i, centres.row(static_cast<std::size_t>(g - 1))));
      total += nearest[i];
    }
    std::size_t pick = n - 1;
    if (total > 0.0) {
      double u = rng.uniform() * total, acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += nearest[i];
        if (u < acc) {
          pick = i;
          break;
        }
      }
    } else {
      pick = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(n) - 1));
    }
    std::copy(z.row(pick).begin(), z.row(pick).end(), centres.row(static_cast<std::size_t>(g)).begin());
  }
  std::vector<int> label(n, -1);
  for (int iter = 0; iter < 100; ++iter) {
    bool changed = false;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = sqdist(i, centres.row(0));
      for (int g = 1; g < G; ++g) {
        const double dd = sqdist(i, centres.row(static_cast<std::size_t>(g)));
        if (dd < bd) {
          bd = dd;
          best = g;
        }
      }
      if (label[i] != best) changed = true;
      label[i] = best;
    }
    if (!changed) break;
    std::vector<double> cnt(static_cast<std::size_t>(G), 0.0);
    Positions sum(static_cast<std::size_t>(G), d);
    for (std::size_t i = 0; i < n; ++i) {
      cnt[static_cast<std::size_t>(label[i])] += 1.0;
      for (std::size_t k = 0; k < d; ++k) sum(static_cast<std::size_t>(label[i]), k) += z(i, k);
    }
    for (int g = 0; g < G; ++g)
      if (cnt[static_cast<std::size_t>(g)] > 0)
        for (std::size_t k = 0; k < d; ++k)
          centres(static_cast<std::size_t>(g), k) = sum(static_cast<std::size_t>(g), k) / cnt[static_cast<std::size_t>(g)];
  }
  return label;
}

EmRun run_em(const Positions& z, int G, const std::vector<int>& start, const MixtureOptions& opts) {
  const std::size_t n = z.rows(), d = z.dim();
  const auto Gs = static_cast<std::size_t>(G);
  EmRun run;
  MixtureFit& f = run.fit;
  f.num_clusters = G;
  f.weights.assign(Gs, 0.0);
  f.means = Positions(Gs, d);
  f.variances.assign(Gs, 0.0);
  f.responsibilities.assign(n * Gs, 0.0);
  for (std::size_t i = 0; i < n; ++i) f.responsibilities[i * Gs + static_cast<std::size_t>(start[i])] = 1.0;

  auto m_step = [&]() -> bool {
    for (std::size_t g = 0; g < Gs; ++g) {
      double r = 0.0;
      std::vector<double> mu(d, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double w = f.responsibilities[i * Gs + g];
        r += w;
        for (std::size_t c = 0; c < d; ++c) mu[c] += w * z(i, c);
      }
      if (!(r > 1e-12)) return false;
      for (std::size_t c = 0; c < d; ++c) f.means(g, c) = mu[c] / r;
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        double sq = 0.0;
        for (std::size_t c = 0; c < d; ++c) sq += (z(i, c) - f.means(g, c)) * (z(i, c) - f.means(g, c));
        ss += f.responsibilities[i * Gs + g] * sq;
      }
      f.weights[g] = r / static_cast<double>(n);
      f.variances[g] = ss / (static_cast<double>(d) * r);
      if (!(f.variances[g] >= opts.min_variance)) return false;
    }
    return true;
  };
  auto e_step = [&]() {
    double ll = 0.0;
    std::vector<double> lp(Gs);
    for (std::size_t i = 0; i < n; ++i) {
      double top = -std::numeric_limits<double>::infinity();
      for (std::size_t g = 0; g < Gs; ++g) {
        lp[g] = std::log(f.weights[g]) + log_normal_spherical(z.row(i), f.means.row(g), f.variances[g]);
        top = std::max(top, lp[g]);
      }
      double s = 0.0;
      for (std::size_t g = 0; g < Gs; ++g) s += std::exp(lp[g] - top);
      const double lse = top + std::log(s);
      for (std::size_t g = 0; g < Gs; ++g) f.responsibilities[i * Gs + g] = std::exp(lp[g] - lse);
      ll += lse;
    }
    return ll;
  };

  if (!m_step()) return run;
  double ll = e_step();
  f.loglik_trace.push_back(ll);
  int it = 1;
  for (; it < opts.max_iterations; ++it) {
    if (!m_step()) return run;
    const double next = e_step();
    if (next < ll - 1e-9 * std::max(1.0, std::fabs(ll)))
      throw NumericError(fmt::format("EM log-likelihood decreased from {} to {}", ll, next));
    f.loglik_trace.push_back(next);
    const bool done = std::fabs(next - ll) < opts.tolerance;
    ll = next;
    if (done) break;
  }
  f.loglik = ll;
  f.iterations = it;
  run.ok = true;
  return run;
}

}  // namespace

MixtureFit bic_lp(const Positions& z, int num_clusters, const MixtureOptions& opts) {
  const std::size_t n = z.rows();
  if (num_clusters < 1 || static_cast<std::size_t>(num_clusters) > n)
    throw std::invalid_argument("G must lie in [1, n]");
  Rng rng(opts.seed, static_cast<std::uint64_t>(num_clusters));
  bool any = false;
  MixtureFit best;
  for (int r = 0; r < opts.restarts; ++r) {
    const auto start = kmeans(z, num_clusters, rng);
    auto run = run_em(z, num_clusters, start, opts);
    if (!run.ok) continue;
    if (!any || run.fit.loglik > best.loglik) best = std::move(run.fit);
    any = true;
  }
  if (!any) throw NumericError(fmt::format("every EM restart collapsed for G = {}", num_clusters));
  best.parameters = num_clusters * (static_cast<int>(z.dim()) + 2) - 1;
  best.bic = 2.0 * best.loglik - best.parameters * std::log(static_cast<double>(n));
  return best;
}

std::vector<BicEntry> bic_reports(const Network& net, const Positions& z_hat, int g_cap, const MixtureOptions& opts) {
  if (g_cap < 1) throw std::invalid_argument("gcap must be at least 1");
  const auto lr = bic_lr(net, z_hat);
  std::vector<BicEntry> out;
  for (int G = 1; G <= g_cap && static_cast<std::size_t>(G) <= z_hat.rows(); ++G) {
    BicEntry e;
    e.num_clusters = G;
    e.lr = lr;
    e.lp = bic_lp(z_hat, G, opts);
    e.bic_lr = lr.bic;
    e.bic_lp = e.lp.bic;
    e.total = e.bic_lr + e.bic_lp;
    e.bic = -e.total;
    out.push_back(std::move(e));
  }
  return out;
}

int select_model(std::span<const BicEntry> reports) {
  if (reports.empty()) throw std::invalid_argument("no BIC reports");
  const BicEntry* best = &reports.front();
  for (const auto& e : reports)
    if (e.bic < best->bic || (e.bic == best->bic && e.num_clusters < best->num_clusters)) best = &e;
  return best->num_clusters;
}

}  // namespace lpcm
