#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace lpcm {

/// n x d latent positions, row-major.
class Positions {
public:
  Positions() = default;
  Positions(std::size_t n, std::size_t d) : n_(n), d_(d), data_(n * d, 0.0) {}
  Positions(std::size_t n, std::size_t d, std::vector<double> data) : n_(n), d_(d), data_(std::move(data)) {
    if (data_.size() != n * d) throw std::invalid_argument("position buffer is not n x d");
  }

  std::size_t rows() const noexcept { return n_; }
  std::size_t dim() const noexcept { return d_; }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * d_, d_}; }
  std::span<const double> row(std::size_t i) const noexcept { return {data_.data() + i * d_, d_}; }

  double& operator()(std::size_t i, std::size_t c) noexcept { return data_[i * d_ + c]; }
  double operator()(std::size_t i, std::size_t c) const noexcept { return data_[i * d_ + c]; }

  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  bool operator==(const Positions&) const = default;

private:
  std::size_t n_ = 0;
  std::size_t d_ = 0;
  std::vector<double> data_;
};

}  // namespace lpcm
