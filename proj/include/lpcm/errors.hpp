#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lpcm {

/// Malformed network or config file. Carries the 1-based line number when known.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// A numerical routine left its domain (non-convergence, corrupted sufficient statistics, ...).
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpcm
