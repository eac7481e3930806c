#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace lpcm {

/// Binary network on n actors. Adjacency is stored densely (row-major, n*n).
///
/// Alongside the raw adjacency the network keeps a symmetric "dyad count" matrix
/// c_ij = y_ij + y_ji (directed) or y_ij (undirected). The log-likelihood only ever
/// needs c_ij and the per-dyad weight (2 directed, 1 undirected), so the kernels
/// iterate over unordered pairs in both cases.
class Network {
public:
  Network() = default;

  /// Validates: square, binary, zero diagonal, symmetric when undirected.
  static Network from_adjacency(std::size_t n, bool directed, std::vector<std::uint8_t> adjacency,
                                std::vector<std::string> labels = {});

  /// Edges are 0-based (from, to). Undirected edges are symmetrized.
  static Network from_edges(std::size_t n, bool directed,
                            std::span<const std::pair<std::size_t, std::size_t>> edges);

  std::size_t size() const noexcept { return n_; }
  bool directed() const noexcept { return directed_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }

  std::uint8_t tie(std::size_t i, std::size_t j) const noexcept { return adjacency_[i * n_ + j]; }

  /// Symmetric dyad-count row for actor i (c_ii = 0).
  std::span<const double> dyad_counts(std::size_t i) const noexcept {
    return {counts_.data() + i * n_, n_};
  }

  /// 2 for directed networks (each unordered pair holds two Bernoulli trials), 1 otherwise.
  double dyad_weight() const noexcept { return directed_ ? 2.0 : 1.0; }

  /// Number of ties: ordered pairs when directed, unordered pairs when undirected.
  std::size_t tie_count() const noexcept { return ties_; }

  /// 0-based edge list: every (i, j) with y_ij = 1 when directed, i < j when undirected.
  std::vector<std::pair<std::size_t, std::size_t>> edges() const;

  bool operator==(const Network& other) const noexcept {
    return n_ == other.n_ && directed_ == other.directed_ && adjacency_ == other.adjacency_;
  }

private:
  void build_counts();

  std::size_t n_ = 0;
  bool directed_ = false;
  std::vector<std::uint8_t> adjacency_;
  std::vector<double> counts_;
  std::vector<std::string> labels_;
  std::size_t ties_ = 0;
};

enum class NetworkFormat { edgelist, adjacency };

NetworkFormat parse_network_format(const std::string& name);

/// Edge list: whitespace-separated 1-based pairs, one per line, '#' comments.
/// A comment of the form "# nodes N" fixes the actor count (otherwise the max id is used).
/// Adjacency: comma-separated square 0/1 matrix.
Network read_network(std::istream& in, NetworkFormat format, bool directed);
Network read_network(const std::filesystem::path& path, NetworkFormat format, bool directed);

/// Writes the edge list format, including the "# nodes N" directive.
void write_edgelist(std::ostream& out, const Network& net);
void write_adjacency(std::ostream& out, const Network& net);

}  // namespace lpcm
