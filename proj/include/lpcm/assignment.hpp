#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lpcm {

/// Exact minimum-cost assignment on a square n x n row-major cost matrix
/// (Hungarian method with potentials, O(n^3)). Returns col[r], the column
/// assigned to row r.
std::vector<int> solve_assignment(std::span<const double> cost, std::size_t n);

double assignment_cost(std::span<const double> cost, std::size_t n, std::span<const int> col);

}  // namespace lpcm
