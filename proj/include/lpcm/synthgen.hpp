#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "lpcm/network.hpp"
#include "lpcm/positions.hpp"
#include "lpcm/rng.hpp"

namespace lpcm {

struct GenSpec {
  std::size_t n = 0;
  int d = 2;
  std::vector<double> weights;    // length G_true
  Positions means;                // G_true x d
  std::vector<double> variances;  // length G_true
  double beta = 0.0;
  bool directed = false;
  std::uint64_t seed = 1;

  int num_clusters() const noexcept { return static_cast<int>(weights.size()); }
  /// Throws std::invalid_argument on inconsistent fields.
  void validate() const;
};

/// JSON: {"n", "d", "weights", "means" (array of d-arrays), "variances", "beta", "directed", "seed"}.
GenSpec read_genspec(std::istream& in);
GenSpec read_genspec(const std::filesystem::path& path);
void write_genspec(std::ostream& out, const GenSpec& spec);

struct SyntheticNetwork {
  Network net;
  Positions z;
  std::vector<int> alloc;  // 0-based
};

/// Draw order: all n labels (one uniform each), then positions actor by actor
/// (d normals each), then ties via simulate_ties.
SyntheticNetwork sample_network(const GenSpec& spec);

/// y_ij ~ Bernoulli(logistic(beta - |z_i - z_j|)), one uniform per dyad in row-major
/// order over i != j (directed) or i < j (undirected).
Network simulate_ties(const Positions& z, double beta, bool directed, Rng& rng);

}  // namespace lpcm
