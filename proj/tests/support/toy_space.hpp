#pragma once

// Exactly enumerable (K, G) space on a handful of frozen 1-D positions, with
// independently derived proposal probabilities for every allocation move.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "lpcm/density.hpp"
#include "lpcm/hyperparams.hpp"
#include "lpcm/network.hpp"
#include "lpcm/sampler.hpp"

namespace toy {

struct State {
  std::vector<int> alloc;
  int G = 1;
  bool operator<(const State& o) const { return G != o.G ? G < o.G : alloc < o.alloc; }
  bool operator==(const State& o) const = default;
};

enum class Kernel { gibbs, move1, move2, move3, eject_absorb };
const char* kernel_name(Kernel k);

class Space {
public:
  Space(std::vector<double> z, lpcm::Hyperparams hp);

  std::size_t size() const { return states_.size(); }
  const State& state(std::size_t s) const { return states_[s]; }
  std::size_t index(const State& s) const { return index_.at(s); }
  const lpcm::Hyperparams& hp() const { return hp_; }
  const lpcm::Positions& z() const { return z_; }
  std::size_t actors() const { return z_.rows(); }

  /// Normalised target over all states.
  const std::vector<double>& target() const { return pi_; }

  /// Unnormalised log target from the library density terms.
  double log_target(const State& s) const;

  lpcm::ChainState chain_state(const State& s) const;

  /// Exact transition matrix (row-major size x size) of one application of the kernel.
  std::vector<double> transition(Kernel k) const;

private:
  std::vector<double> row(Kernel k, std::size_t from) const;

  lpcm::Positions z_;
  lpcm::Hyperparams hp_;
  lpcm::LogTermCache cache_;
  std::vector<State> states_;
  std::map<State, std::size_t> index_;
  std::vector<double> pi_;
};

/// max_j |(pi P)_j - pi_j| summed / 2
double tv_after(const std::vector<double>& pi, const std::vector<double>& P);

/// max over i,j of |pi_i P_ij - pi_j P_ji|
double balance_gap(const std::vector<double>& pi, const std::vector<double>& P);

/// Empirical distribution of the next state when the sampler's own move is applied
/// `trials` times from `from` (fresh random stream per trial).
std::vector<double> sampled_row(const Space& space, Kernel k, std::size_t from, int trials, std::uint64_t seed);

/// Pearson chi-square p-value of observed counts against expected probabilities
/// (cells with zero expectation must have zero counts).
double chi_square_pvalue(const std::vector<double>& observed_freq, const std::vector<double>& expected, int trials);

}  // namespace toy
