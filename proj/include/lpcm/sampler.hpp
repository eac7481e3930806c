#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lpcm/density.hpp"
#include "lpcm/hyperparams.hpp"
#include "lpcm/kernels.hpp"
#include "lpcm/network.hpp"
#include "lpcm/rng.hpp"

namespace lpcm {

enum class Move { beta, positions, gibbs, move1, move2, move3, eject, absorb };
inline constexpr std::size_t kMoveKinds = 8;
const char* move_name(Move m);

/// For the allocation moves (Gibbs, moves 1-3) a proposal only counts as accepted
/// when it changes the partition of the actors; accepted proposals that reproduce it
/// (possibly with j1 and j2 swapped) are tallied in `unchanged`.
struct MoveCounters {
  std::array<std::uint64_t, kMoveKinds> attempted{};
  std::array<std::uint64_t, kMoveKinds> accepted{};
  std::array<std::uint64_t, kMoveKinds> unchanged{};

  void attempt(Move m) { ++attempted[static_cast<std::size_t>(m)]; }
  void accept(Move m) { ++accepted[static_cast<std::size_t>(m)]; }
  void keep(Move m) { ++unchanged[static_cast<std::size_t>(m)]; }
  std::uint64_t attempts(Move m) const { return attempted[static_cast<std::size_t>(m)]; }
  std::uint64_t accepts(Move m) const { return accepted[static_cast<std::size_t>(m)]; }
  /// Acceptance rate, NaN when never attempted.
  double rate(Move m) const;

  MoveCounters& operator+=(const MoveCounters& o);
};

/// Test hooks. force_reject rejects every Metropolis-Hastings proposal after
/// drawing all of its random numbers.
struct SamplerHooks {
  bool force_reject = false;
  /// Position proposals equal the current point (the normal draws are still consumed).
  bool zero_step = false;
};

/// Initial state: Z_i ~ N(0, 4 I), beta ~ N(xi, psi), G = 1, all actors in cluster 0.
ChainState initial_state(const Network& net, const Hyperparams& hp, Rng& rng);

class Sampler {
public:
  Sampler(const Network& net, const Hyperparams& hp, ChainState init, Rng rng,
          const kernels::DyadKernels& kern = kernels::best_kernels());

  /// One Metropolis update per actor position, then beta, then the Gibbs sweep over K,
  /// then moves 1-3 and one eject/absorb attempt.
  void sweep();

  void update_positions();
  void update_intercept();
  void gibbs_allocations();
  void move1();
  void move2();
  void move3();
  void eject_or_absorb();
  bool eject();
  bool absorb();

  /// Replace the observed network (e.g. when alternating with data simulation).
  void set_network(const Network& net);
  void set_hooks(SamplerHooks hooks) { hooks_ = hooks; }

  const ChainState& state() const noexcept { return state_; }
  const MoveCounters& counters() const noexcept { return counters_; }
  const Hyperparams& hyperparams() const noexcept { return hp_; }
  const kernels::DyadKernels& kernel() const noexcept { return *kern_; }
  Rng& rng() noexcept { return rng_; }

  /// Log-likelihood from the cached distances.
  double log_likelihood() const;
  double log_posterior() const;

private:
  void refresh_geometry();
  double row_loglik(std::size_t i, const double* dist) const;
  bool accept(double log_ratio);
  std::vector<std::size_t> members_of(int j1, int j2) const;
  void assign(std::size_t actor, int label);
  bool try_reassign(Move kind, int j1, int j2, const std::vector<std::size_t>& members,
                    const std::vector<int>& labels, double log_proposal);

  const Network* net_;
  Hyperparams hp_;
  ChainState state_;
  Rng rng_;
  const kernels::DyadKernels* kern_;
  LogTermCache cache_;
  SamplerHooks hooks_;
  MoveCounters counters_;

  std::size_t n_;
  std::size_t d_;
  std::vector<double> soa_;   // coordinate-major copy of Z
  std::vector<double> dist_;  // n x n distances
  std::vector<double> scratch_;
  std::vector<double> proposal_;
};

struct RunConfig {
  long iterations = 10000;
  long burnin = 1000;
  long thin = 10;
  std::uint64_t seed = 1;
  std::string kernel = "auto";

  void validate() const;
};

struct DrawRecord {
  long iter = 0;
  int num_clusters = 0;
  double beta = 0.0;
  double loglik = 0.0;
  double logpost = 0.0;
  std::vector<int> alloc;
  Positions z;
};

struct ChainResult {
  std::vector<DrawRecord> draws;
  MoveCounters counters;
  ChainState final_state;
};

using ProgressFn = std::function<void(long done, long total)>;

/// Runs one chain from initial_state. Draws are retained after `burnin` sweeps, every `thin`.
/// iter is the 1-based sweep index.
ChainResult run_chain(const Network& net, const Hyperparams& hp, const RunConfig& cfg,
                      const ProgressFn& progress = {}, std::uint64_t stream = 0);

}  // namespace lpcm
