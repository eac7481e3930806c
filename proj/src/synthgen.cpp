#include "lpcm/synthgen.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "lpcm/errors.hpp"

namespace lpcm {

void GenSpec::validate() const {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
  if (d < 1) throw std::invalid_argument("d must be at least 1");
  const auto G = weights.size();
  if (G < 1) throw std::invalid_argument("at least one component is required");
  if (means.rows() != G || means.dim() != static_cast<std::size_t>(d))
    throw std::invalid_argument("means must be G x d");
  if (variances.size() != G) throw std::invalid_argument("variances must have G entries");
  for (double w : weights)
    if (!(w >= 0.0)) throw std::invalid_argument("weights must be non-negative");
  if (std::fabs(std::accumulate(weights.begin(), weights.end(), 0.0) - 1.0) > 1e-9)
    throw std::invalid_argument("weights must sum to 1");
  for (double v : variances)
    if (!(v > 0.0)) throw std::invalid_argument("variances must be positive");
  if (!std::isfinite(beta)) throw std::invalid_argument("beta must be finite");
}

GenSpec read_genspec(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("GenSpec is not valid JSON: ") + e.what(), 0);
  }
  try {
    GenSpec s;
    s.n = j.at("n").get<std::size_t>();
    s.d = j.value("d", 2);
    s.weights = j.at("weights").get<std::vector<double>>();
    const auto means = j.at("means").get<std::vector<std::vector<double>>>();
    s.means = Positions(means.size(), static_cast<std::size_t>(s.d));
    for (std::size_t g = 0; g < means.size(); ++g) {
      if (means[g].size() != static_cast<std::size_t>(s.d)) throw std::invalid_argument("mean has the wrong dimension");
      for (std::size_t c = 0; c < means[g].size(); ++c) s.means(g, c) = means[g][c];
    }
    s.variances = j.at("variances").get<std::vector<double>>();
    s.beta = j.at("beta").get<double>();
    s.directed = j.value("directed", false);
    s.seed = j.value("seed", std::uint64_t{1});
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("GenSpec field error: ") + e.what(), 0);
  }
}

GenSpec read_genspec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_genspec(in);
}

void write_genspec(std::ostream& out, const GenSpec& spec) {
  nlohmann::json means = nlohmann::json::array();
  for (std::size_t g = 0; g < spec.means.rows(); ++g) {
    const auto r = spec.means.row(g);
    means.push_back(std::vector<double>(r.begin(), r.end()));
  }
  nlohmann::json j{{"n", spec.n},        {"d", spec.d},       {"weights", spec.weights},
                   {"means", means},     {"variances", spec.variances}, {"beta", spec.beta},
                   {"directed", spec.directed}, {"seed", spec.seed}};
  out << j.dump(2) << '\n';
}

Network simulate_ties(const Positions& z, double beta, bool directed, Rng& rng) {
  const std::size_t n = z.rows();
  std::vector<std::uint8_t> adj(n * n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      double s = 0.0;
      for (std::size_t c = 0; c < z.dim(); ++c) s += (z(i, c) - z(j, c)) * (z(i, c) - z(j, c));
      const double eta = beta - std::sqrt(s);
      const double p = 1.0 / (1.0 + std::exp(-eta));
      const bool tie = rng.uniform() < p;
      adj[i * n + j] = tie;
      if (!directed) adj[j * n + i] = tie;
    }
  }
  return Network::from_adjacency(n, directed, std::move(adj));
}

SyntheticNetwork sample_network(const GenSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.n;
  const auto d = static_cast<std::size_t>(spec.d);
  SyntheticNetwork out;
  out.alloc.resize(n);
  for (auto& k : out.alloc) {
    const double u = rng.uniform();
    double acc = 0.0;
    k = spec.num_clusters() - 1;
    for (int g = 0; g < spec.num_clusters(); ++g) {
      acc += spec.weights[static_cast<std::size_t>(g)];
      if (u < acc) {
        k = g;
        break;
      }
    }
  }
  out.z = Positions(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto g = static_cast<std::size_t>(out.alloc[i]);
    const double sd = std::sqrt(spec.variances[g]);
    for (std::size_t c = 0; c < d; ++c) out.z(i, c) = rng.normal(spec.means(g, c), sd);
  }
  out.net = simulate_ties(out.z, spec.beta, spec.directed, rng);
  return out;
}

}  // namespace lpcm
