#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "lpcm/artifacts.hpp"
#include "lpcm/bic.hpp"
#include "lpcm/network.hpp"
#include "lpcm/postprocess.hpp"
#include "lpcm/sampler.hpp"
#include "lpcm/synthgen.hpp"

#ifndef LPCM_VERSION
#define LPCM_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using namespace lpcm;

namespace {

struct RunOptions {
  std::string data;
  std::string format = "edgelist";
  bool directed = false;
  RunConfig cfg;
  Hyperparams hp;
  int chains = 1;
  std::string out;
  bool progress = false;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream f(p);
  if (!f) throw std::runtime_error("cannot write " + p.string());
  return f;
}

std::ifstream open_in(const fs::path& p) {
  require_file(p);
  std::ifstream f(p);
  if (!f) throw std::runtime_error("cannot read " + p.string());
  return f;
}

void write_postprocessed(const fs::path& dir, const std::vector<DrawRecord>& draws, const MoveCounters& counters) {
  if (draws.empty()) {
    write_json(dir / kSummaryFile, {{"schema_version", kSchemaVersion}, {"draws", 0}});
    return;
  }
  const auto pp = postprocess(draws, counters);
  {
    auto f = open_out(dir / kAlignedPositionsFile);
    write_positions_csv(f, draws, pp.aligned);
  }
  write_json(dir / kSummaryFile, summary_to_json(pp.summary));
}

int cmd_run(const RunOptions& o) {
  const auto net = read_network(fs::path(o.data), parse_network_format(o.format), o.directed);
  const Hyperparams hp = o.hp.with_defaults_for(net.size());
  o.cfg.validate();
  const auto& kern = kernels::kernels_by_name(o.cfg.kernel);

  std::vector<ChainResult> results(static_cast<std::size_t>(o.chains));
  std::vector<std::exception_ptr> errors(results.size());
  auto work = [&](std::size_t c) {
    try {
      RunConfig cfg = o.cfg;
      cfg.seed = o.cfg.seed + c;
      ProgressFn progress;
      if (o.progress && c == 0)
        progress = [](long done, long total) { std::cerr << fmt::format("\rsweep {}/{}", done, total) << std::flush; };
      results[c] = run_chain(net, hp, cfg, progress);
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t c = 1; c < results.size(); ++c) pool.emplace_back(work, c);
  work(0);
  for (auto& t : pool) t.join();
  if (o.progress) std::cerr << '\n';
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::vector<DrawRecord> draws;
  MoveCounters counters;
  for (std::size_t c = 0; c < results.size(); ++c) {
    for (auto& d : results[c].draws) {
      d.iter += static_cast<long>(c) * o.cfg.iterations;
      draws.push_back(std::move(d));
    }
    counters += results[c].counters;
  }

  const fs::path dir(o.out);
  fs::create_directories(dir);
  {
    auto f = open_out(dir / kDrawsFile);
    write_draws_csv(f, draws);
  }
  {
    auto f = open_out(dir / kPositionsFile);
    write_positions_csv(f, draws);
  }
  write_json(dir / kCountersFile, counters_to_json(counters));
  write_json(dir / kMetadataFile,
             {{"schema_version", kSchemaVersion},
              {"version", LPCM_VERSION},
              {"seed", o.cfg.seed},
              {"chains", o.chains},
              {"kernel", kern.name},
              {"config", {{"iterations", o.cfg.iterations}, {"burnin", o.cfg.burnin}, {"thin", o.cfg.thin}}},
              {"hyperparameters", hyperparams_to_json(hp)},
              {"data",
               {{"path", fs::absolute(o.data).lexically_normal().string()},
                {"format", o.format},
                {"directed", o.directed},
                {"actors", net.size()},
                {"ties", net.tie_count()},
                {"crc32", file_checksum(o.data)}}}});
  write_postprocessed(dir, draws, counters);

  const auto probs = draws.empty() ? std::map<int, double>{} : model_probabilities(draws);
  for (const auto& [g, p] : probs) std::cout << fmt::format("G={} {:.4f}\n", g, p);
  return 0;
}

std::vector<DrawRecord> load_draws(const fs::path& dir) {
  auto df = open_in(dir / kDrawsFile);
  auto draws = read_draws_csv(df);
  auto pf = open_in(dir / kPositionsFile);
  read_positions_csv(pf, draws);
  return draws;
}

int cmd_summarize(const std::string& run_dir) {
  const fs::path dir(run_dir);
  const auto draws = load_draws(dir);
  const auto counters = counters_from_json(read_json(dir / kCountersFile));
  write_postprocessed(dir, draws, counters);
  return 0;
}

int cmd_baseline(const std::string& run_dir, std::string data, std::string format, bool directed, bool directed_set,
                 int gcap, std::string out) {
  const fs::path dir(run_dir);
  const auto meta = read_json(dir / kMetadataFile);
  if (data.empty()) data = meta.at("data").at("path").get<std::string>();
  if (format.empty()) format = meta.at("data").at("format").get<std::string>();
  if (!directed_set) directed = meta.at("data").at("directed").get<bool>();
  const auto net = read_network(fs::path(data), parse_network_format(format), directed);
  const auto draws = load_draws(dir);
  if (draws.empty()) throw std::runtime_error("the run retained no draws");
  const std::size_t ref = reference_draw(draws);
  const auto z_hat = point_estimate_positions(draws);
  const auto reports = bic_reports(net, z_hat, gcap);
  const int best = select_model(reports);
  const fs::path target = out.empty() ? dir / kBicFile : fs::path(out);
  write_json(target, bic_to_json(reports, best, ref, draws[ref].iter));
  for (const auto& e : reports) std::cout << fmt::format("G={} BIC={:.3f}\n", e.num_clusters, e.bic);
  std::cout << fmt::format("selected G={}\n", best);
  return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& out, const std::string& format,
                 const std::string& truth) {
  const auto spec = read_genspec(fs::path(spec_path));
  const auto sim = sample_network(spec);
  {
    auto f = open_out(out);
    if (parse_network_format(format) == NetworkFormat::edgelist)
      write_edgelist(f, sim.net);
    else
      write_adjacency(f, sim.net);
  }
  if (!truth.empty()) {
    auto f = open_out(truth);
    f << "actor,k";
    for (std::size_t c = 1; c <= sim.z.dim(); ++c) f << ",x_" << c;
    f << '\n';
    for (std::size_t i = 0; i < spec.n; ++i) {
      f << fmt::format("{},{}", i + 1, sim.alloc[i] + 1);
      for (double v : sim.z.row(i)) f << fmt::format(",{}", v);
      f << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Collapsed latent position cluster model for networks"};
  app.set_version_flag("--version", LPCM_VERSION);
  app.require_subcommand(1);

  RunOptions ro;
  auto* run = app.add_subcommand("run", "Run the sampler and write artifacts");
  run->add_option("--data", ro.data, "Network file")->required()->check(CLI::ExistingFile);
  run->add_option("--format", ro.format, "edgelist or adjacency")->check(CLI::IsMember({"edgelist", "adjacency"}));
  run->add_flag("--directed", ro.directed, "Treat ties as directed");
  run->add_option("--iters", ro.cfg.iterations, "Total sweeps")->check(CLI::PositiveNumber);
  run->add_option("--burnin", ro.cfg.burnin, "Discarded sweeps")->check(CLI::NonNegativeNumber);
  run->add_option("--thin", ro.cfg.thin, "Keep every t-th sweep")->check(CLI::PositiveNumber);
  run->add_option("--seed", ro.cfg.seed, "Random seed");
  run->add_option("--d", ro.hp.d, "Latent dimension")->check(CLI::PositiveNumber);
  run->add_option("--sigma-z2", ro.hp.sigma_z2, "Position proposal variance");
  run->add_option("--sigma-beta2", ro.hp.sigma_beta2, "Intercept proposal variance");
  run->add_option("--alpha", ro.hp.alpha);
  run->add_option("--delta", ro.hp.delta);
  run->add_option("--nu", ro.hp.nu);
  run->add_option("--omega2", ro.hp.omega2);
  run->add_option("--xi", ro.hp.xi);
  run->add_option("--psi", ro.hp.psi);
  run->add_option("--a-eject", ro.hp.a_eject, "Beta(a, a) parameter of the ejection proposal");
  run->add_option("--gmax", ro.hp.g_max, "Largest G (default floor(n/2))")->check(CLI::PositiveNumber);
  run->add_option("--chains", ro.chains, "Independent chains, seeds seed..seed+k-1")->check(CLI::PositiveNumber);
  run->add_option("--kernel", ro.cfg.kernel, "Likelihood kernel")->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  run->add_option("--out", ro.out, "Output directory")->required();
  run->add_flag("--progress", ro.progress, "Report progress on stderr");

  std::string sum_dir;
  auto* summarize = app.add_subcommand("summarize", "Recompute the summary from a run directory");
  summarize->add_option("--run", sum_dir, "Run directory")->required();

  std::string bl_dir, bl_data, bl_format, bl_out;
  bool bl_directed = false;
  int gcap = 5;
  auto* baseline = app.add_subcommand("baseline", "Two-stage BIC on a finished run");
  baseline->add_option("--run", bl_dir, "Run directory")->required();
  baseline->add_option("--gcap", gcap, "Largest G to fit")->check(CLI::PositiveNumber);
  baseline->add_option("--data", bl_data, "Network file (default: the run's)");
  baseline->add_option("--format", bl_format)->check(CLI::IsMember({"edgelist", "adjacency"}));
  auto* bl_dir_flag = baseline->add_flag("--directed", bl_directed);
  baseline->add_option("--out", bl_out, "Report path (default: <run>/bic.json)");

  std::string sim_spec, sim_out, sim_format = "edgelist", sim_truth;
  auto* simulate = app.add_subcommand("simulate", "Sample a network from a generative spec");
  simulate->add_option("--spec", sim_spec, "GenSpec JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", sim_out, "Network file to write")->required();
  simulate->add_option("--format", sim_format)->check(CLI::IsMember({"edgelist", "adjacency"}));
  simulate->add_option("--truth", sim_truth, "Optional CSV of true labels and positions");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      if (ro.cfg.burnin > ro.cfg.iterations) {
        std::cerr << "error: --burnin exceeds --iters\n";
        return 2;
      }
      return cmd_run(ro);
    }
    if (*summarize) return cmd_summarize(sum_dir);
    if (*baseline) return cmd_baseline(bl_dir, bl_data, bl_format, bl_directed, bl_dir_flag->count() > 0, gcap, bl_out);
    if (*simulate) return cmd_simulate(sim_spec, sim_out, sim_format, sim_truth);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
