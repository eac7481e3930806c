#include "lpcm/artifacts.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <boost/crc.hpp>
#include <fmt/format.h>

#include "lpcm/errors.hpp"

namespace lpcm {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    if (s == "nan") return NAN;
    throw ParseError("not a number: '" + s + "'", line);
  }
}

long to_long(const std::string& s, std::size_t line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("not an integer: '" + s + "'", line);
  }
}

}  // namespace

void write_draws_csv(std::ostream& out, std::span<const DrawRecord> draws) {
  const std::size_t n = draws.empty() ? 0 : draws.front().alloc.size();
  out << "iter,G,beta,loglik,logpost";
  for (std::size_t i = 1; i <= n; ++i) out << ",k_" << i;
  out << '\n';
  std::string line;
  for (const auto& d : draws) {
    line = fmt::format("{},{},{},{},{}", d.iter, d.num_clusters, d.beta, d.loglik, d.logpost);
    for (int k : d.alloc) fmt::format_to(std::back_inserter(line), ",{}", k + 1);
    out << line << '\n';
  }
}

std::vector<DrawRecord> read_draws_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("draws file is empty", 1);
  const auto header = split_csv(line);
  if (header.size() < 5 || header[0] != "iter" || header[1] != "G" || header[2] != "beta" ||
      header[3] != "loglik" || header[4] != "logpost")
    throw ParseError("unexpected draws header", 1);
  const std::size_t n = header.size() - 5;
  std::vector<DrawRecord> draws;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split_csv(line);
    if (f.size() != header.size()) throw ParseError("wrong number of fields", lineno);
    DrawRecord d;
    d.iter = to_long(f[0], lineno);
    d.num_clusters = static_cast<int>(to_long(f[1], lineno));
    d.beta = to_double(f[2], lineno);
    d.loglik = to_double(f[3], lineno);
    d.logpost = to_double(f[4], lineno);
    d.alloc.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const long k = to_long(f[5 + i], lineno);
      if (k < 1 || k > d.num_clusters) throw ParseError("label outside 1..G", lineno);
      d.alloc[i] = static_cast<int>(k - 1);
    }
    draws.push_back(std::move(d));
  }
  return draws;
}

void write_positions_csv(std::ostream& out, std::span<const DrawRecord> draws, std::span<const Positions> z) {
  if (z.size() != draws.size()) throw std::invalid_argument("one position matrix per draw is required");
  const std::size_t dim = draws.empty() ? 0 : z.front().dim();
  out << "iter,actor";
  for (std::size_t c = 1; c <= dim; ++c) out << ",x_" << c;
  out << '\n';
  std::string line;
  for (std::size_t t = 0; t < draws.size(); ++t) {
    for (std::size_t i = 0; i < z[t].rows(); ++i) {
      line = fmt::format("{},{}", draws[t].iter, i + 1);
      for (double v : z[t].row(i)) fmt::format_to(std::back_inserter(line), ",{}", v);
      out << line << '\n';
    }
  }
}

void write_positions_csv(std::ostream& out, std::span<const DrawRecord> draws) {
  std::vector<Positions> z;
  z.reserve(draws.size());
  for (const auto& d : draws) z.push_back(d.z);
  write_positions_csv(out, draws, z);
}

void read_positions_csv(std::istream& in, std::vector<DrawRecord>& draws) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("positions file is empty", 1);
  const auto header = split_csv(line);
  if (header.size() < 3 || header[0] != "iter" || header[1] != "actor")
    throw ParseError("unexpected positions header", 1);
  const std::size_t dim = header.size() - 2;
  std::size_t lineno = 1;
  for (auto& d : draws) {
    const std::size_t n = d.alloc.size();
    d.z = Positions(n, dim);
    for (std::size_t i = 0; i < n; ++i) {
      ++lineno;
      if (!std::getline(in, line)) throw ParseError("positions file ends early", lineno);
      const auto f = split_csv(line);
      if (f.size() != header.size()) throw ParseError("wrong number of fields", lineno);
      if (to_long(f[0], lineno) != d.iter || to_long(f[1], lineno) != static_cast<long>(i + 1))
        throw ParseError("positions rows do not follow the draws file", lineno);
      for (std::size_t c = 0; c < dim; ++c) d.z(i, c) = to_double(f[2 + c], lineno);
    }
  }
}

nlohmann::json counters_to_json(const MoveCounters& c) {
  nlohmann::json moves = nlohmann::json::object();
  for (std::size_t k = 0; k < kMoveKinds; ++k) {
    const auto m = static_cast<Move>(k);
    const double r = c.rate(m);
    moves[move_name(m)] = {{"attempted", c.attempts(m)},
                           {"accepted", c.accepts(m)},
                           {"accepted_unchanged", c.unchanged[k]},
                           {"rate", std::isnan(r) ? nlohmann::json(nullptr) : nlohmann::json(r)}};
  }
  return {{"schema_version", kSchemaVersion}, {"moves", moves}};
}

MoveCounters counters_from_json(const nlohmann::json& j) {
  MoveCounters c;
  const auto& moves = j.at("moves");
  for (std::size_t k = 0; k < kMoveKinds; ++k) {
    const auto& e = moves.at(move_name(static_cast<Move>(k)));
    c.attempted[k] = e.at("attempted").get<std::uint64_t>();
    c.accepted[k] = e.at("accepted").get<std::uint64_t>();
    c.unchanged[k] = e.value("accepted_unchanged", std::uint64_t{0});
  }
  return c;
}

nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json probs = nlohmann::json::object();
  for (const auto& [g, p] : s.model_probabilities) probs[std::to_string(g)] = p;
  nlohmann::json rates = nlohmann::json::object();
  for (std::size_t k = 0; k < kMoveKinds; ++k) {
    const auto m = static_cast<Move>(k);
    const double r = s.counters.rate(m);
    rates[move_name(m)] = std::isnan(r) ? nlohmann::json(nullptr) : nlohmann::json(r);
  }
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : s.groups) {
    const auto G = static_cast<std::size_t>(g.num_clusters);
    nlohmann::json mean = nlohmann::json::array(), member = nlohmann::json::array();
    for (std::size_t i = 0; i < g.mean_z.rows(); ++i) {
      const auto r = g.mean_z.row(i);
      mean.push_back(std::vector<double>(r.begin(), r.end()));
      member.push_back(std::vector<double>(g.membership.begin() + static_cast<std::ptrdiff_t>(i * G),
                                           g.membership.begin() + static_cast<std::ptrdiff_t>((i + 1) * G)));
    }
    std::vector<int> modal(g.modal_alloc);
    for (int& k : modal) ++k;
    groups.push_back({{"G", g.num_clusters},
                      {"probability", g.probability},
                      {"draws", g.draws},
                      {"reference_index", g.reference},
                      {"relabel_rounds", g.relabel_rounds},
                      {"cluster_sizes", g.cluster_sizes},
                      {"modal_allocation", modal},
                      {"mean_positions", mean},
                      {"membership", member}});
  }
  return {{"schema_version", kSchemaVersion},
          {"actors", s.actors},
          {"draws", s.draws},
          {"model_probabilities", probs},
          {"modal_G", s.modal_clusters},
          {"reference", {{"index", s.reference}, {"iter", s.reference_iter}}},
          {"beta", {{"mean", s.beta_mean}, {"sd", s.beta_sd}}},
          {"acceptance_rates", rates},
          {"groups", groups}};
}

nlohmann::json hyperparams_to_json(const Hyperparams& hp) {
  return {{"xi", hp.xi},         {"psi", hp.psi},           {"alpha", hp.alpha},
          {"delta", hp.delta},   {"nu", hp.nu},             {"omega2", hp.omega2},
          {"d", hp.d},           {"g_max", hp.g_max},       {"sigma_z2", hp.sigma_z2},
          {"sigma_beta2", hp.sigma_beta2}, {"a_eject", hp.a_eject}};
}

nlohmann::json bic_to_json(std::span<const BicEntry> reports, int selected, std::size_t reference_index,
                           long reference_iter) {
  nlohmann::json entries = nlohmann::json::array();
  for (const auto& e : reports) {
    nlohmann::json means = nlohmann::json::array();
    for (std::size_t g = 0; g < e.lp.means.rows(); ++g) {
      const auto r = e.lp.means.row(g);
      means.push_back(std::vector<double>(r.begin(), r.end()));
    }
    entries.push_back({{"G", e.num_clusters},
                       {"bic", e.bic},
                       {"bic_lr", e.bic_lr},
                       {"bic_lp", e.bic_lp},
                       {"total", e.total},
                       {"beta_hat", e.lr.beta_hat},
                       {"loglik_lr", e.lr.loglik},
                       {"n_lr", e.lr.n_lr},
                       {"loglik_lp", e.lp.loglik},
                       {"d_lp", e.lp.parameters},
                       {"weights", e.lp.weights},
                       {"means", means},
                       {"variances", e.lp.variances}});
  }
  return {{"schema_version", kSchemaVersion},
          {"selected_G", selected},
          {"convention", "bic = -(bic_lr + bic_lp); smaller is better"},
          {"n_lr", "number of ties"},
          {"positions", {{"estimate", "highest log-likelihood retained draw"},
                         {"index", reference_index},
                         {"iter", reference_iter}}},
          {"reports", entries}};
}

std::string file_checksum(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  boost::crc_32_type crc;
  char buf[1 << 14];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) crc.process_bytes(buf, static_cast<std::size_t>(in.gcount()));
  return fmt::format("{:08x}", crc.checksum());
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json read_json(const std::filesystem::path& path) {
  require_file(path);
  std::ifstream in(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

void require_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("missing artifact: " + path.string());
}

}  // namespace lpcm
