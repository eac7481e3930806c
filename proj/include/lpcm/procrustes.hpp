#pragma once

#include "lpcm/positions.hpp"

namespace lpcm {

/// Orthogonal Procrustes: rotates/reflects and translates z onto ref in the
/// least-squares sense. Both configurations are centred; the orthogonal factor
/// comes from the SVD of the cross-covariance. When z has no spread the result
/// is z translated onto ref's centroid.
Positions procrustes_align(const Positions& z, const Positions& ref);

/// Frobenius norm of z - ref.
double frobenius_residual(const Positions& z, const Positions& ref);

}  // namespace lpcm
