#pragma once

#include <cstdint>
#include <random>

#include <boost/random/beta_distribution.hpp>
#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_int_distribution.hpp>

namespace lpcm {

/// Seedable random stream. The engine is std::mt19937_64 seeded through
/// std::seed_seq{seed_lo, seed_hi, stream_lo, stream_hi}; both are fully specified
/// by the C++ standard. Distributions come from Boost.Random because the <random>
/// distributions are implementation-defined. Distribution objects are created per
/// draw, so no hidden state carries between calls.
class Rng {
public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  /// Independent stream derived from this generator's seed space.
  static Rng split(std::uint64_t seed, std::uint64_t stream) { return Rng(seed, stream + 1); }

  /// Uniform on [0, 1).
  double uniform() { return boost::random::uniform_01<double>{}(engine_); }

  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi) { return boost::random::uniform_int_distribution<int>{lo, hi}(engine_); }

  double normal(double mean = 0.0, double sd = 1.0) {
    return boost::random::normal_distribution<double>{mean, sd}(engine_);
  }

  double gamma(double shape, double scale = 1.0) {
    return boost::random::gamma_distribution<double>{shape, scale}(engine_);
  }

  double beta(double a, double b) { return boost::random::beta_distribution<double>{a, b}(engine_); }

  engine_type& engine() noexcept { return engine_; }

private:
  engine_type engine_;
};

}  // namespace lpcm
