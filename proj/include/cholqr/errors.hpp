#pragma once

#include <stdexcept>
#include <string>

#include "cholqr/types.hpp"

namespace cholqr {

/// Base class for all structured failures of the toolkit.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A computed Cholesky pivot was <= 0 (or not finite). Signals that
/// cond(A)^2 has exceeded working precision.
class CholeskyBreakdown : public Error {
 public:
  explicit CholeskyBreakdown(Index pivot_index)
      : Error("cholesky breakdown at pivot " + std::to_string(pivot_index)),
        pivot_index(pivot_index) {}
  Index pivot_index;
};

/// An exactly-zero diagonal entry in a triangular factor.
class SingularTriangular : public Error {
 public:
  explicit SingularTriangular(Index index)
      : Error("singular triangular factor, zero diagonal at " + std::to_string(index)),
        index(index) {}
  Index index;
};

/// Jacobi SVD did not converge within the sweep cap.
class NoConvergence : public Error {
 public:
  explicit NoConvergence(int sweeps)
      : Error("svd did not converge within " + std::to_string(sweeps) + " sweeps"),
        sweeps(sweeps) {}
  int sweeps;
};

/// A sampled leverage probability underflowed to zero (row of Q exactly zero).
class ZeroLeverageRow : public Error {
 public:
  explicit ZeroLeverageRow(Index row)
      : Error("zero leverage score for row " + std::to_string(row)), row(row) {}
  Index row;
};

/// Relative residual of an all-zero matrix is undefined.
class ZeroMatrix : public Error {
 public:
  ZeroMatrix() : Error("matrix has zero Frobenius norm") {}
};

/// Smallest singular value below the numerical rank threshold.
class RankDeficient : public Error {
 public:
  RankDeficient(double sigma_min, double sigma_max)
      : Error("numerically rank deficient: sigma_min=" + std::to_string(sigma_min) +
              " sigma_max=" + std::to_string(sigma_max)),
        sigma_min(sigma_min),
        sigma_max(sigma_max) {}
  double sigma_min;
  double sigma_max;
};

/// One of the hypotheses of a probabilistic bound does not hold; the bound is
/// inapplicable, which is distinct from the algorithm having failed.
class HypothesisViolated : public Error {
 public:
  explicit HypothesisViolated(const std::string& which)
      : Error("bound hypothesis violated: " + which), which(which) {}
  std::string which;
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error("dimension mismatch: " + what) {}
};

namespace detail {

inline void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* name) {
  if (!a.allFinite()) throw std::invalid_argument(std::string(name) + " has non-finite entries");
}

}  // namespace detail
}  // namespace cholqr
