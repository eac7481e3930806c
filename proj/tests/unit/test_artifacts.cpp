#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lpcm/artifacts.hpp"
#include "lpcm/errors.hpp"
#include "lpcm/sampler.hpp"
#include "lpcm/synthgen.hpp"

using namespace lpcm;

namespace {

ChainResult small_run() {
  GenSpec spec;
  spec.n = 8;
  spec.weights = {0.5, 0.5};
  spec.means = Positions(2, 2, {-2.0, 0.0, 2.0, 0.0});
  spec.variances = {0.3, 0.3};
  spec.beta = 1.5;
  spec.seed = 2;
  RunConfig cfg;
  cfg.iterations = 400;
  cfg.burnin = 100;
  cfg.thin = 10;
  return run_chain(sample_network(spec).net, Hyperparams{}, cfg);
}

std::set<std::string> keys(const nlohmann::json& j) {
  std::set<std::string> out;
  for (const auto& [k, v] : j.items()) out.insert(k);
  return out;
}

}  // namespace

TEST_SUITE("artifacts") {

TEST_CASE("draws and positions round-trip exactly") {
  const auto run = small_run();
  std::stringstream d, p;
  write_draws_csv(d, run.draws);
  write_positions_csv(p, run.draws);
  auto back = read_draws_csv(d);
  read_positions_csv(p, back);
  REQUIRE(back.size() == run.draws.size());
  for (std::size_t t = 0; t < back.size(); ++t) {
    CHECK(back[t].iter == run.draws[t].iter);
    CHECK(back[t].num_clusters == run.draws[t].num_clusters);
    CHECK(back[t].beta == run.draws[t].beta);
    CHECK(back[t].loglik == run.draws[t].loglik);
    CHECK(back[t].logpost == run.draws[t].logpost);
    CHECK(back[t].alloc == run.draws[t].alloc);
    CHECK(back[t].z.data() == run.draws[t].z.data());
  }
}

TEST_CASE("draws file layout") {
  DrawRecord r;
  r.iter = 20;
  r.num_clusters = 2;
  r.beta = 0.5;
  r.loglik = -10.25;
  r.logpost = -30.0;
  r.alloc = {0, 1, 1};
  r.z = Positions(3, 2, {0.0, 1.0, 2.0, 3.0, 4.0, 5.5});
  std::ostringstream d, p;
  write_draws_csv(d, std::span(&r, 1));
  write_positions_csv(p, std::span(&r, 1));
  CHECK(d.str() == "iter,G,beta,loglik,logpost,k_1,k_2,k_3\n20,2,0.5,-10.25,-30,1,2,2\n");
  CHECK(p.str() == "iter,actor,x_1,x_2\n20,1,0,1\n20,2,2,3\n20,3,4,5.5\n");
}

TEST_CASE("malformed draws are rejected with line numbers") {
  std::istringstream bad_header("it,G\n");
  CHECK_THROWS_AS(read_draws_csv(bad_header), ParseError);
  std::istringstream bad_label("iter,G,beta,loglik,logpost,k_1\n1,1,0,0,0,2\n");
  try {
    read_draws_csv(bad_label);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::istringstream short_row("iter,G,beta,loglik,logpost,k_1,k_2\n1,1,0,0,0,1\n");
  CHECK_THROWS_AS(read_draws_csv(short_row), ParseError);
}

TEST_CASE("counters JSON round-trips and uses the documented names") {
  const auto run = small_run();
  const auto j = counters_to_json(run.counters);
  CHECK(j.at("schema_version") == kSchemaVersion);
  CHECK(keys(j.at("moves")) ==
        std::set<std::string>{"beta", "Z", "gibbs_K", "move1", "move2", "move3", "eject", "absorb"});
  for (const auto& [name, e] : j.at("moves").items())
    CHECK(keys(e) == std::set<std::string>{"attempted", "accepted", "accepted_unchanged", "rate"});
  const auto back = counters_from_json(j);
  CHECK(back.attempted == run.counters.attempted);
  CHECK(back.accepted == run.counters.accepted);
  CHECK(back.unchanged == run.counters.unchanged);
}

TEST_CASE("summary JSON schema") {
  const auto run = small_run();
  const auto pp = postprocess(run.draws, run.counters);
  const auto j = summary_to_json(pp.summary);
  CHECK(keys(j) == std::set<std::string>{"schema_version", "actors", "draws", "model_probabilities", "modal_G",
                                         "reference", "beta", "acceptance_rates", "groups"});
  CHECK(keys(j.at("reference")) == std::set<std::string>{"index", "iter"});
  CHECK(keys(j.at("beta")) == std::set<std::string>{"mean", "sd"});
  double total = 0.0;
  for (const auto& [g, p] : j.at("model_probabilities").items()) total += p.get<double>();
  CHECK(total == doctest::Approx(1.0));
  REQUIRE(!j.at("groups").empty());
  for (const auto& g : j.at("groups")) {
    CHECK(keys(g) == std::set<std::string>{"G", "probability", "draws", "reference_index", "relabel_rounds",
                                           "cluster_sizes", "modal_allocation", "mean_positions", "membership"});
    const int G = g.at("G");
    CHECK(g.at("membership").size() == 8);
    CHECK(g.at("membership")[0].size() == static_cast<std::size_t>(G));
    CHECK(g.at("mean_positions")[0].size() == 2);
    for (int k : g.at("modal_allocation")) {
      CHECK(k >= 1);
      CHECK(k <= G);
    }
  }
}

TEST_CASE("BIC JSON schema") {
  BicEntry e;
  e.num_clusters = 2;
  e.lp.means = Positions(2, 2);
  e.lp.weights = {0.5, 0.5};
  e.lp.variances = {1.0, 1.0};
  const auto j = bic_to_json(std::span(&e, 1), 2, 3, 40);
  CHECK(keys(j) == std::set<std::string>{"schema_version", "selected_G", "convention", "n_lr", "positions", "reports"});
  CHECK(keys(j.at("reports")[0]) == std::set<std::string>{"G", "bic", "bic_lr", "bic_lp", "total", "beta_hat",
                                                           "loglik_lr", "n_lr", "loglik_lp", "d_lp", "weights",
                                                           "means", "variances"});
  CHECK(j.at("positions").at("iter") == 40);
}

TEST_CASE("checksums and missing files") {
  const auto dir = std::filesystem::temp_directory_path() / "lpcm_artifacts_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream f(dir / "x.txt", std::ios::binary);
    f << "123456789";
  }
  CHECK(file_checksum(dir / "x.txt") == "cbf43926");
  CHECK_THROWS_WITH(require_file(dir / "absent.json"), doctest::Contains("missing artifact"));
  write_json(dir / "a.json", {{"k", 1}});
  CHECK(read_json(dir / "a.json").at("k") == 1);
  std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
