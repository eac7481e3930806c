#include "lpcm/network.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lpcm/errors.hpp"

namespace lpcm {

Network Network::from_adjacency(std::size_t n, bool directed, std::vector<std::uint8_t> adjacency,
                                std::vector<std::string> labels) {
  if (adjacency.size() != n * n) throw std::invalid_argument("adjacency is not n x n");
  if (!labels.empty() && labels.size() != n) throw std::invalid_argument("label count differs from n");
  for (std::size_t i = 0; i < n; ++i) {
    if (adjacency[i * n + i] != 0) throw std::invalid_argument("nonzero diagonal entry");
    for (std::size_t j = 0; j < n; ++j) {
      const auto y = adjacency[i * n + j];
      if (y > 1) throw std::invalid_argument("adjacency entries must be 0 or 1");
      if (!directed && y != adjacency[j * n + i])
        throw std::invalid_argument("undirected network with asymmetric adjacency");
    }
  }
  Network net;
  net.n_ = n;
  net.directed_ = directed;
  net.adjacency_ = std::move(adjacency);
  net.labels_ = std::move(labels);
  net.build_counts();
  return net;
}

Network Network::from_edges(std::size_t n, bool directed,
                            std::span<const std::pair<std::size_t, std::size_t>> edges) {
  std::vector<std::uint8_t> adj(n * n, 0);
  for (auto [i, j] : edges) {
    if (i >= n || j >= n) throw std::invalid_argument("edge endpoint out of range");
    if (i == j) throw std::invalid_argument("self-tie");
    adj[i * n + j] = 1;
    if (!directed) adj[j * n + i] = 1;
  }
  return from_adjacency(n, directed, std::move(adj));
}

void Network::build_counts() {
  counts_.assign(n_ * n_, 0.0);
  ties_ = 0;
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (i == j) continue;
      const double yij = adjacency_[i * n_ + j];
      counts_[i * n_ + j] = directed_ ? yij + adjacency_[j * n_ + i] : yij;
      if (adjacency_[i * n_ + j] && (directed_ || i < j)) ++ties_;
    }
  }
}

std::vector<std::pair<std::size_t, std::size_t>> Network::edges() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  out.reserve(ties_);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = directed_ ? 0 : i + 1; j < n_; ++j)
      if (adjacency_[i * n_ + j]) out.emplace_back(i, j);
  return out;
}

NetworkFormat parse_network_format(const std::string& name) {
  if (name == "edgelist") return NetworkFormat::edgelist;
  if (name == "adjacency") return NetworkFormat::adjacency;
  throw std::invalid_argument("unknown network format '" + name + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_uint(std::string_view token, std::size_t& value) {
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  return ec == std::errc{} && ptr == end;
}

Network read_edgelist(std::istream& in, bool directed) {
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::size_t declared_n = 0, max_id = 0, lineno = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      std::istringstream directive{std::string(body.substr(1))};
      std::string key;
      std::size_t value = 0;
      if (directive >> key >> value && key == "nodes") declared_n = value;
      continue;
    }
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = trim(body.substr(0, hash));
    std::istringstream fields{std::string(body)};
    std::string a, b, extra;
    if (!(fields >> a >> b) || (fields >> extra))
      throw ParseError("expected exactly two actor ids", lineno);
    std::size_t i = 0, j = 0;
    if (!parse_uint(a, i) || !parse_uint(b, j)) throw ParseError("actor ids must be positive integers", lineno);
    if (i == 0 || j == 0) throw ParseError("actor ids are 1-based", lineno);
    if (i == j) throw ParseError("self-tie (nonzero diagonal)", lineno);
    if (declared_n && (i > declared_n || j > declared_n))
      throw ParseError("actor id exceeds declared node count", lineno);
    max_id = std::max({max_id, i, j});
    edges.emplace_back(i - 1, j - 1);
  }
  const std::size_t n = declared_n ? declared_n : max_id;
  std::vector<std::uint8_t> adj(n * n, 0);
  for (auto [i, j] : edges) {
    adj[i * n + j] = 1;
    if (!directed) adj[j * n + i] = 1;
  }
  return Network::from_adjacency(n, directed, std::move(adj));
}

Network read_adjacency(std::istream& in, bool directed) {
  std::vector<std::vector<std::uint8_t>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<std::uint8_t> row;
    std::size_t start = 0;
    while (true) {
      const auto comma = body.find(',', start);
      const auto cell = trim(body.substr(start, comma == std::string_view::npos ? body.npos : comma - start));
      if (cell == "0") row.push_back(0);
      else if (cell == "1") row.push_back(1);
      else throw ParseError("non-binary entry '" + std::string(cell) + "'", lineno);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (!rows.empty() && row.size() != rows.front().size()) throw ParseError("ragged row", lineno);
    const std::size_t r = rows.size();
    if (r >= row.size()) throw ParseError("more rows than columns", lineno);
    if (row[r] != 0) throw ParseError("nonzero diagonal entry", lineno);
    rows.push_back(std::move(row));
  }
  const std::size_t n = rows.size();
  if (n > 0 && rows.front().size() != n) throw ParseError("adjacency matrix is not square", lineno);
  std::vector<std::uint8_t> adj;
  adj.reserve(n * n);
  for (auto& r : rows) adj.insert(adj.end(), r.begin(), r.end());
  if (!directed) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (adj[i * n + j] != adj[j * n + i])
          throw ParseError("asymmetric adjacency for an undirected network (actors " + std::to_string(i + 1) +
                               ", " + std::to_string(j + 1) + ")",
                           0);
  }
  return Network::from_adjacency(n, directed, std::move(adj));
}

}  // namespace

Network read_network(std::istream& in, NetworkFormat format, bool directed) {
  return format == NetworkFormat::edgelist ? read_edgelist(in, directed) : read_adjacency(in, directed);
}

Network read_network(const std::filesystem::path& path, NetworkFormat format, bool directed) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path.string());
  return read_network(in, format, directed);
}

void write_edgelist(std::ostream& out, const Network& net) {
  out << "# nodes " << net.size() << '\n';
  for (auto [i, j] : net.edges()) out << i + 1 << ' ' << j + 1 << '\n';
}

void write_adjacency(std::ostream& out, const Network& net) {
  for (std::size_t i = 0; i < net.size(); ++i) {
    for (std::size_t j = 0; j < net.size(); ++j) out << (j ? "," : "") << int(net.tie(i, j));
    out << '\n';
  }
}

}  // namespace lpcm
