#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "lpcm/errors.hpp"
#include "lpcm/synthgen.hpp"

using namespace lpcm;

namespace {

GenSpec base_spec() {
  GenSpec s;
  s.n = 20;
  s.d = 2;
  s.weights = {1.0};
  s.means = Positions(1, 2);
  s.variances = {1.0};
  s.beta = 0.0;
  s.seed = 5;
  return s;
}

}  // namespace

TEST_SUITE("synthgen") {

TEST_CASE("saturated intercepts give complete and empty graphs") {
  for (bool directed : {false, true}) {
    auto s = base_spec();
    s.directed = directed;
    s.beta = 50.0;
    const auto full = sample_network(s);
    CHECK(full.net.tie_count() == (directed ? 20u * 19u : 20u * 19u / 2u));
    s.beta = -50.0;
    CHECK(sample_network(s).net.tie_count() == 0);
  }
}

TEST_CASE("undirected output is symmetric") {
  auto s = base_spec();
  s.beta = 1.0;
  const auto sim = sample_network(s);
  for (std::size_t i = 0; i < s.n; ++i) {
    CHECK(sim.net.tie(i, i) == 0);
    for (std::size_t j = 0; j < s.n; ++j) CHECK(sim.net.tie(i, j) == sim.net.tie(j, i));
  }
}

TEST_CASE("fixed seed reproduces the network") {
  auto s = base_spec();
  s.weights = {0.3, 0.7};
  s.means = Positions(2, 2, {-1.0, 0.0, 1.0, 0.0});
  s.variances = {0.5, 0.2};
  s.directed = true;
  const auto a = sample_network(s), b = sample_network(s);
  CHECK(a.net == b.net);
  CHECK(a.alloc == b.alloc);
  CHECK(a.z.data() == b.z.data());
  s.seed = 6;
  CHECK_FALSE(sample_network(s).alloc == a.alloc);
}

TEST_CASE("tie density matches the Monte Carlo expectation") {
  // E[logistic(-|z_i - z_j|)] with z_i - z_j ~ N(0, 2 I_2), by independent Monte Carlo
  std::mt19937_64 gen(99);
  std::normal_distribution<double> nd(0.0, std::sqrt(2.0));
  const int mc = 2000000;
  double expected = 0.0;
  for (int t = 0; t < mc; ++t) expected += 1.0 / (1.0 + std::exp(std::hypot(nd(gen), nd(gen))));
  expected /= mc;

  auto s = base_spec();
  s.n = 50;
  std::vector<double> density;
  for (int rep = 0; rep < 200; ++rep) {
    s.seed = 1000 + static_cast<std::uint64_t>(rep);
    density.push_back(static_cast<double>(sample_network(s).net.tie_count()) / (50.0 * 49.0 / 2.0));
  }
  double mean = 0.0, var = 0.0;
  for (double x : density) mean += x;
  mean /= 200.0;
  for (double x : density) var += (x - mean) * (x - mean);
  const double se = std::sqrt(var / 199.0 / 200.0);
  CAPTURE(expected);
  CAPTURE(mean);
  CHECK(std::fabs(mean - expected) < 3.0 * se);
}

TEST_CASE("component assignment follows the weights") {
  auto s = base_spec();
  s.n = 4000;
  s.weights = {0.2, 0.8};
  s.means = Positions(2, 2, {0.0, 0.0, 30.0, 0.0});
  s.variances = {0.01, 0.01};
  s.beta = -50.0;
  const auto sim = sample_network(s);
  double ones = 0.0, far = 0.0;
  for (std::size_t i = 0; i < s.n; ++i) {
    ones += sim.alloc[i];
    far += sim.alloc[i] == 1 && std::fabs(sim.z(i, 0) - 30.0) < 1.0;
  }
  CHECK(std::fabs(ones / 4000.0 - 0.8) < 4.0 * std::sqrt(0.16 / 4000.0));
  CHECK(far == ones);
}

TEST_CASE("spec JSON round-trips") {
  auto s = base_spec();
  s.weights = {0.25, 0.75};
  s.means = Positions(2, 2, {-1.5, 0.5, 2.0, 0.125});
  s.variances = {0.3, 0.4};
  s.beta = 1.25;
  s.directed = true;
  s.seed = 77;
  std::stringstream io;
  write_genspec(io, s);
  const auto r = read_genspec(io);
  CHECK(r.n == s.n);
  CHECK(r.d == s.d);
  CHECK(r.weights == s.weights);
  CHECK(r.means.data() == s.means.data());
  CHECK(r.variances == s.variances);
  CHECK(r.beta == s.beta);
  CHECK(r.directed == s.directed);
  CHECK(r.seed == s.seed);
}

TEST_CASE("invalid specs are rejected") {
  auto s = base_spec();
  s.weights = {0.5, 0.6};
  s.means = Positions(2, 2);
  s.variances = {1.0, 1.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.weights = {0.5, 0.5};
  s.variances = {1.0, 0.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.variances = {1.0};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  std::istringstream bad("{\"n\": 5");
  CHECK_THROWS_AS(read_genspec(bad), ParseError);
  std::istringstream missing(R"({"n": 5, "weights": [1]})");
  CHECK_THROWS_AS(read_genspec(missing), ParseError);
}

}  // TEST_SUITE
