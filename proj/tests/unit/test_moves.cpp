#include <doctest.h>

#include <cmath>
#include <random>

#include "lpcm/moves.hpp"
#include "toy_space.hpp"

using namespace lpcm;
using doctest::Approx;

namespace {

Hyperparams toy_hp(double a = 1.0) {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 3;
  hp.a_eject = a;
  return hp;
}

const std::vector<double> kGrid{-0.6, 0.0, 0.9};

}  // namespace

TEST_SUITE("moves") {

TEST_CASE("toy space has every labelled allocation") {
  toy::Space space(kGrid, toy_hp());
  CHECK(space.size() == 1 + 8 + 27);
  double total = 0.0;
  for (double p : space.target()) total += p;
  CHECK(total == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("every allocation kernel leaves the enumerated posterior invariant") {
  for (double a : {1.0, 0.6, 2.5}) {
    toy::Space space(kGrid, toy_hp(a));
    for (auto k : {toy::Kernel::gibbs, toy::Kernel::move1, toy::Kernel::move2, toy::Kernel::move3,
                   toy::Kernel::eject_absorb}) {
      CAPTURE(toy::kernel_name(k));
      CAPTURE(a);
      const auto P = space.transition(k);
      for (std::size_t s = 0; s < space.size(); ++s) {
        double row = 0.0;
        for (std::size_t t = 0; t < space.size(); ++t) row += P[s * space.size() + t];
        CHECK(row == Approx(1.0).epsilon(1e-12));
      }
      CHECK(toy::tv_after(space.target(), P) <= 1e-10);
      if (k != toy::Kernel::gibbs) CHECK(toy::balance_gap(space.target(), P) <= 1e-12);
    }
  }
}

TEST_CASE("invariance holds on four actors with a wider g_max") {
  auto hp = toy_hp(1.0);
  hp.g_max = 3;
  toy::Space space({-1.2, -0.1, 0.3, 1.4}, hp);
  for (auto k : {toy::Kernel::move1, toy::Kernel::move2, toy::Kernel::move3, toy::Kernel::eject_absorb}) {
    CAPTURE(toy::kernel_name(k));
    CHECK(toy::tv_after(space.target(), space.transition(k)) <= 1e-10);
  }
}

TEST_CASE("sampler moves draw from the enumerated transition rows") {
  toy::Space space(kGrid, toy_hp(1.0));
  const int trials = 20000;
  const std::vector<toy::State> starts{{{0, 1, 1}, 2}, {{0, 0, 1}, 3}, {{0, 0, 0}, 1}, {{2, 0, 1}, 3}};
  for (auto k : {toy::Kernel::gibbs, toy::Kernel::move1, toy::Kernel::move2, toy::Kernel::move3,
                 toy::Kernel::eject_absorb}) {
    const auto P = space.transition(k);
    for (const auto& s : starts) {
      const auto from = space.index(s);
      std::vector<double> expect(P.begin() + static_cast<std::ptrdiff_t>(from * space.size()),
                                 P.begin() + static_cast<std::ptrdiff_t>((from + 1) * space.size()));
      const auto got = toy::sampled_row(space, k, from, trials, 99);
      CAPTURE(toy::kernel_name(k));
      CAPTURE(s.G);
      CHECK(toy::chi_square_pvalue(got, expect, trials) > 1e-3);
    }
  }
}

TEST_CASE("gibbs weights of two mirrored clusters at the symmetry point are equal") {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 2;
  const Positions z(5, 1, {-1.0, -2.0, 1.0, 2.0, 0.0});
  const auto st = make_state(z, 0.0, {0, 0, 1, 1, 0}, 2);
  LogTermCache cache(hp, 5);
  const auto w = moves::gibbs_log_weights(st, cache, 4);
  CHECK(w[0] == Approx(w[1]).epsilon(1e-13));
}

TEST_CASE("gibbs with one component keeps everyone in it") {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 1;
  toy::Space space(kGrid, hp);
  const auto got = toy::sampled_row(space, toy::Kernel::gibbs, 0, 50, 1);
  CHECK(got[0] == 1.0);
}

TEST_CASE("gibbs frequencies on four actors match the direct weights") {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 2;
  toy::Space space({-0.8, -0.5, 0.4, 1.1}, hp);
  const auto P = space.transition(toy::Kernel::gibbs);
  const auto from = space.index({{0, 1, 0, 1}, 2});
  std::vector<double> expect(P.begin() + static_cast<std::ptrdiff_t>(from * space.size()),
                             P.begin() + static_cast<std::ptrdiff_t>((from + 1) * space.size()));
  const int trials = 100000;
  const auto got = toy::sampled_row(space, toy::Kernel::gibbs, from, trials, 7);
  CHECK(toy::chi_square_pvalue(got, expect, trials) > 1e-3);
}

TEST_CASE("identity reassignment has zero log ratio") {
  Hyperparams hp;
  hp.d = 1;
  const Positions z(4, 1, {0.1, 0.2, -0.3, 0.5});
  const auto st = make_state(z, 0.0, {0, 1, 0, 1}, 2);
  LogTermCache cache(hp, 4);
  const std::vector<std::size_t> m{0, 1, 2, 3};
  const std::vector<int> same{0, 1, 0, 1};
  CHECK(moves::reassign_log_delta(st, cache, 0, 1, m, same) == 0.0);
  CHECK(moves::move1_log_proposal_ratio(2, 2, 2, 2) == 0.0);
}

TEST_CASE("move 1 with coincident positions depends only on counts") {
  Hyperparams hp;
  hp.d = 1;
  const Positions z(5, 1, {0.3, 0.3, 0.3, 0.3, 0.3});
  const auto st = make_state(z, 0.0, {0, 0, 0, 1, 1}, 2);
  LogTermCache cache(hp, 5);
  const std::vector<std::size_t> m{0, 1, 2, 3, 4};
  const std::vector<int> lab{0, 1, 1, 1, 1};
  auto term = [&](int c) {
    ClusterStats s(1);
    for (int i = 0; i < c; ++i) s.add(std::vector<double>{0.3});
    return log_cluster_term(s, hp) + std::lgamma(c + hp.nu);
  };
  const double expect = term(1) + term(4) - term(3) - term(2);
  CHECK(moves::reassign_log_delta(st, cache, 0, 1, m, lab) == Approx(expect).epsilon(1e-12));
  CHECK(moves::move1_log_proposal_ratio(3, 2, 1, 4) ==
        Approx(std::log(6.0 * 2.0 / (1.0 * 24.0))).epsilon(1e-12));
}

TEST_CASE("move 2 proposal ratio by factorial arithmetic") {
  CHECK(moves::move2_log_proposal_ratio(3, 1, 2) == Approx(0.0).epsilon(1e-14));
  CHECK(std::exp(moves::move2_log_proposal_ratio(4, 0, 4)) == Approx(1.0).epsilon(1e-13));
  CHECK(std::exp(moves::move2_log_proposal_ratio(5, 2, 1)) == Approx(5.0 / 3.0 * 5.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("move 3 on a single actor is always accepted") {
  Hyperparams hp;
  hp.d = 1;
  const Positions z(3, 1, {0.2, -1.0, 1.3});
  const auto st = make_state(z, 0.0, {0, 1, 2}, 3);
  LogTermCache cache(hp, 3);
  // j1 = 0 holds actor 0, j2 = 1 holds actor 1; restrict to a pair with one member by emptying j2
  const auto st1 = make_state(z, 0.0, {0, 2, 2}, 3);
  const std::vector<std::size_t> order{0};
  for (int to : {0, 1}) {
    const std::vector<int> lab{to}, orig{0};
    const double lr = moves::reassign_log_delta(st1, cache, 0, 1, order, lab) +
                      moves::move3_log_path_probability(st1, cache, 0, 1, order, orig) -
                      moves::move3_log_path_probability(st1, cache, 0, 1, order, lab);
    CHECK(lr == Approx(0.0).epsilon(1e-12));
  }
  (void)st;
}

TEST_CASE("move 3 probabilities are one half for symmetric shells") {
  Hyperparams hp;
  hp.d = 1;
  LogTermCache cache(hp, 6);
  ClusterStats a(1), b(1);
  a.add(std::vector<double>{-1.0});
  b.add(std::vector<double>{1.0});
  CHECK(moves::sequential_first_probability(a, b, std::vector<double>{0.0}, cache) == Approx(0.5).epsilon(1e-14));
}

TEST_CASE("eject probabilities") {
  CHECK(moves::eject_probability(1, 5) == 1.0);
  CHECK(moves::eject_probability(3, 5) == 0.5);
  CHECK(moves::eject_probability(5, 5) == 0.0);
  CHECK(moves::eject_probability(1, 1) == 0.0);
}

TEST_CASE("ejecting nothing from an empty cluster reduces to the prior and proposal constants") {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 4;
  hp.a_eject = 1.0;
  const Positions z(3, 1, {0.2, -1.0, 1.3});
  const auto st = make_state(z, 0.0, {0, 0, 0}, 2);  // cluster 1 is empty
  LogTermCache cache(hp, 3);
  const double lr = moves::eject_log_ratio(st, cache, 1, {}, 1.0, hp.g_max);
  // new empty cluster: Poisson prior 1/3, Dirichlet-multinomial change, and
  // (1 - 1/2)/(1/2) * Gamma(1)^2/Gamma(2) * Gamma(2)/(Gamma(1) Gamma(1)) = 1
  const double dm = std::lgamma(3 * hp.nu) - std::lgamma(2 * hp.nu) - std::lgamma(hp.nu) - std::lgamma(3 + 3 * hp.nu) +
                    std::lgamma(3 + 2 * hp.nu) + std::lgamma(hp.nu);
  CHECK(lr == Approx(dm - std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("absorb ratio is the negated reverse eject ratio") {
  Hyperparams hp;
  hp.d = 1;
  hp.g_max = 4;
  const Positions z(5, 1, {0.2, -1.0, 1.3, 0.7, -0.4});
  LogTermCache cache(hp, 5);
  const auto merged = make_state(z, 0.0, {0, 1, 0, 0, 1}, 2);
  const auto split = make_state(z, 0.0, {0, 1, 2, 2, 1}, 3);
  const std::vector<std::size_t> moved{2, 3};
  for (double a : {1.0, 0.4}) {
    CHECK(moves::absorb_log_ratio(split, cache, 0, a, hp.g_max) ==
          Approx(-moves::eject_log_ratio(merged, cache, 0, moved, a, hp.g_max)).epsilon(1e-12));
  }
}

TEST_CASE("cached terms agree with the direct formulas") {
  Hyperparams hp;
  hp.g_max = 5;
  LogTermCache cache(hp, 10);
  std::mt19937_64 gen(1);
  std::normal_distribution<double> nd;
  ClusterStats s(2);
  for (int i = 0; i < 10; ++i) {
    CHECK(cache.cluster_term(s) == Approx(log_cluster_term(s, hp)).epsilon(1e-14));
    s.add(std::vector<double>{nd(gen), nd(gen)});
  }
  const std::vector<int> k{0, 1, 1, 2, 0, 0, 2, 1, 1, 1};
  double v = cache.allocation_constant(3);
  for (int c : {3, 5, 2}) v += cache.log_gamma_nu(c);
  CHECK(v == Approx(log_allocation_terms(k, 3, hp)).epsilon(1e-13));
}

}  // TEST_SUITE
