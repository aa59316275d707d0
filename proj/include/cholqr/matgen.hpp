#pragma once

#include <cstdint>

#include "cholqr/types.hpp"

namespace cholqr::matgen {

/// Recipe for a test matrix with geometrically spaced singular values:
/// ||A||_2 = 1 and cond(A) = kappa.
struct MatrixSpec {
  Index m = 0;
  Index n = 0;
  double kappa = 1.0;
  std::uint64_t seed = 0;
};

/// rows x cols matrix with orthonormal columns, obtained as the thin Q factor
/// of a seeded standard Gaussian matrix.
Matrix random_orthogonal(Index rows, Index cols, std::uint64_t seed);

/// A = U diag(1, s^{1/(n-1)}, ..., s) V^T with s = 1/kappa. Deterministic per
/// spec: repeated calls produce bitwise identical matrices.
Matrix synthesize(const MatrixSpec& spec);

/// Maximally coherent test case: the first n rows are I_n; the remaining rows
/// are 1e-8-scaled Gaussian noise so the matrix stays full rank. m == n gives
/// exactly I_n.
Matrix embedded_identity(Index m, Index n, std::uint64_t seed = 0);

}  // namespace cholqr::matgen
