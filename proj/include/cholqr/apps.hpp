#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cholqr/sketch.hpp"
#include "cholqr/types.hpp"

namespace cholqr::apps {

/// Compressed sparse row matrix; indices sorted within each row.
struct SparseMatrixCsr {
  Index rows = 0;
  Index cols = 0;
  std::vector<Index> row_ptr;  // size rows + 1, nondecreasing, back() == nnz
  std::vector<Index> col_idx;
  std::vector<double> values;

  Index nnz() const { return static_cast<Index>(values.size()); }

  /// Throws std::invalid_argument when an invariant is broken.
  void validate() const;

  /// Dense y = A * x (x is n x k, row major).
  Matrix multiply(const ConstMatrixRef& x, int workers = 1) const;
  /// Dense y = A^T * x (x is m x k).
  Matrix multiply_transposed(const ConstMatrixRef& x, int workers = 1) const;
};

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Build CSR from unordered triplets; duplicate positions are summed.
SparseMatrixCsr csr_from_triplets(Index rows, Index cols, std::vector<Triplet> entries);

/// Matrix Market reader for "%%MatrixMarket matrix coordinate real general"
/// (1-based indices per the format).
SparseMatrixCsr load_matrix_market(const std::string& path);

/// Seeded random sparse matrix with about density*rows*cols N(0,1) entries.
SparseMatrixCsr random_sparse(Index rows, Index cols, double density, std::uint64_t seed);

/// Orthogonalizer used inside the power iteration.
enum class Orth { HouseholderQr, RqrCholeskyQr, CholeskyQr2 };

const char* orth_name(Orth o);

struct RsvdResult {
  Matrix u;      // m x k: A * U~, deliberately left non-orthogonal
  Vector sigma;  // k, nonincreasing and nonnegative
  Matrix v;      // n x k, orthonormal columns
  int iterations = 0;
  /// Wall milliseconds of every orthogonalization call, in execution order
  /// (1 + 2*iterations entries).
  std::vector<double> per_iteration_orth_time;
};

/// Randomized SVD with power iteration: Y = A X, orthonormalize, then
/// `power_iters` rounds of (A^T Y, orth, A Y, orth). The top-k factors come
/// from the small SVD of A^T Q, and U = A U~ exactly as stated, which leaves
/// U non-orthogonal; u_sigma_consistency reports how far U^T U is from
/// diag(sigma^2) instead of silently re-orthogonalizing.
RsvdResult rsvd_power(const SparseMatrixCsr& a, Index k, int power_iters, Orth orth,
                      std::uint64_t seed, int workers = 1);

/// ||U^T U - diag(sigma^2)||_F.
double u_sigma_consistency(const RsvdResult& r);

/// Least-squares solver preconditioned by the randomized R factor: with R1
/// from a sketch of A, solves min ||B y - b|| for B = A R1^{-1} by the normal
/// equations of the well-conditioned B, then x = R1^{-1} y.
Vector ls_solve(const ConstMatrixRef& a, const Vector& b, const sketch::SketchConfig& cfg);

/// Raw normal-equation solver x = (A^T A)^{-1} A^T b; comparison baseline that
/// inherits cond(A)^2.
Vector ls_solve_normal(const ConstMatrixRef& a, const Vector& b);

}  // namespace cholqr::apps
