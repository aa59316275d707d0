#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "cholqr/errors.hpp"
#include "cholqr/types.hpp"

namespace cholqr::kernels {

namespace detail {

/// Rows per Grammian leaf. The reduction tree over leaves is a function of the
/// row count alone, so the result is bitwise independent of how many workers
/// evaluate the leaves.
inline constexpr Index kGramLeafRows = 1024;

inline Index gram_leaf_count(Index rows) {
  return (rows + kGramLeafRows - 1) / kGramLeafRows;
}

/// Evaluate leaf partial Grammians [first, last) of `a` into `slots`.
/// Each slot holds the upper triangle of chunk^T * chunk.
inline void gram_leaves(const ConstMatrixRef& a, std::vector<Matrix>& slots, Index first,
                        Index last) {
  const Index n = a.cols();
  for (Index leaf = first; leaf < last; ++leaf) {
    const Index r0 = leaf * kGramLeafRows;
    const Index len = std::min(a.rows() - r0, kGramLeafRows);
    Matrix& g = slots[static_cast<std::size_t>(leaf)];
    g.setZero(n, n);
    g.template selfadjointView<Eigen::Upper>().rankUpdate(a.middleRows(r0, len).transpose());
  }
}

/// Combine leaf slots with the fixed pairwise tree (0+1)+(2+3)+...; an odd
/// trailing slot is carried up one level unchanged.
inline Matrix gram_tree_combine(std::vector<Matrix>& slots) {
  Index len = static_cast<Index>(slots.size());
  while (len > 1) {
    const Index pairs = len / 2;
    for (Index i = 0; i < pairs; ++i)
      slots[static_cast<std::size_t>(i)] =
          slots[static_cast<std::size_t>(2 * i)] + slots[static_cast<std::size_t>(2 * i + 1)];
    if (len % 2 == 1) {
      slots[static_cast<std::size_t>(pairs)] = std::move(slots[static_cast<std::size_t>(len - 1)]);
      len = pairs + 1;
    } else {
      len = pairs;
    }
  }
  return std::move(slots[0]);
}

}  // namespace detail

/// G = A^T A, computed as upper triangle and mirrored so G is symmetric to the
/// bit. Accumulation runs over fixed row chunks combined by a fixed pairwise
/// tree; the summation order depends only on the row count.
inline Matrix gram(const ConstMatrixRef& a) {
  cholqr::detail::require(a.rows() >= a.cols(), "gram: matrix must have rows >= cols");
  std::vector<Matrix> slots(static_cast<std::size_t>(detail::gram_leaf_count(a.rows())));
  detail::gram_leaves(a, slots, 0, static_cast<Index>(slots.size()));
  Matrix g = detail::gram_tree_combine(slots);
  g = g.selfadjointView<Eigen::Upper>();
  return g;
}

/// Upper Cholesky factor R of a symmetric positive definite G: R^T R = G,
/// diag(R) > 0, zeros below the diagonal. Throws CholeskyBreakdown with the
/// offending pivot index when a computed pivot is <= 0 or non-finite.
template <typename Derived>
Matrix cholesky_upper(const Eigen::MatrixBase<Derived>& g) {
  cholqr::detail::require(g.rows() == g.cols(), "cholesky_upper: matrix must be square");
  const Index n = g.rows();
  Matrix r = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    double s = g(i, i) - r.col(i).head(i).squaredNorm();
    if (!(s > 0.0)) throw CholeskyBreakdown(i);
    const double d = std::sqrt(s);
    r(i, i) = d;
    for (Index j = i + 1; j < n; ++j)
      r(i, j) = (g(i, j) - r.col(i).head(i).dot(r.col(j).head(i))) / d;
  }
  return r;
}

namespace detail {

inline constexpr Index kTrisolvePanelRows = 256;

}  // namespace detail

/// Solve X R = A in place (X overwrites A), row-wise back substitution against
/// upper-triangular R. Every row is processed by an identical fused
/// multiply-add recurrence, so the result for a row depends only on that row:
/// solving any partition of the rows yields bitwise identical output.
inline void right_trisolve_in_place(MatrixRef x, const ConstMatrixRef& r) {
  const Index n = r.rows();
  cholqr::detail::require(r.cols() == n, "right_trisolve: R must be square");
  cholqr::detail::require(x.cols() == n, "right_trisolve: dimension mismatch");
  for (Index j = 0; j < n; ++j)
    if (r(j, j) == 0.0) throw SingularTriangular(j);

  const Eigen::MatrixXd rc = r;  // column-major copy for contiguous column reads
  Eigen::MatrixXd w(detail::kTrisolvePanelRows, n);
  for (Index p0 = 0; p0 < x.rows(); p0 += detail::kTrisolvePanelRows) {
    const Index pr = std::min(x.rows() - p0, detail::kTrisolvePanelRows);
    w.topRows(pr) = x.middleRows(p0, pr);
    for (Index j = 0; j < n; ++j) {
      double* yj = w.col(j).data();
      for (Index k = 0; k < j; ++k) {
        const double c = rc(k, j);
        if (c == 0.0) continue;
        const double* xk = w.col(k).data();
        for (Index i = 0; i < pr; ++i) yj[i] = std::fma(-c, xk[i], yj[i]);
      }
      const double d = rc(j, j);
      for (Index i = 0; i < pr; ++i) yj[i] /= d;
    }
    x.middleRows(p0, pr) = w.topRows(pr);
  }
}

/// X with X R = A; no explicit inverse is formed.
inline Matrix right_trisolve(const ConstMatrixRef& a, const ConstMatrixRef& r) {
  Matrix x = a;
  right_trisolve_in_place(x, r);
  return x;
}

/// Solve R x = y (upper triangular, back substitution).
inline Vector solve_upper(const ConstMatrixRef& r, const Vector& y) {
  const Index n = r.rows();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) == 0.0) throw SingularTriangular(j);
  Vector x = y;
  for (Index i = n - 1; i >= 0; --i) {
    x(i) -= r.row(i).segment(i + 1, n - 1 - i).dot(x.segment(i + 1, n - 1 - i).transpose());
    x(i) /= r(i, i);
  }
  return x;
}

/// Solve R^T x = y (forward substitution on the transpose of upper R).
inline Vector solve_upper_transposed(const ConstMatrixRef& r, const Vector& y) {
  const Index n = r.rows();
  for (Index j = 0; j < n; ++j)
    if (r(j, j) == 0.0) throw SingularTriangular(j);
  Vector x = y;
  for (Index i = 0; i < n; ++i) {
    x(i) -= r.col(i).head(i).dot(x.head(i));
    x(i) /= r(i, i);
  }
  return x;
}

namespace detail {

/// Flip rows of an upper-triangular factor so the diagonal is nonnegative.
inline void normalize_r_sign(MatrixRef r) {
  for (Index i = 0; i < r.rows(); ++i)
    if (r(i, i) < 0.0) r.row(i).tail(r.cols() - i) = -r.row(i).tail(r.cols() - i);
}

}  // namespace detail

/// n x n R factor of a Householder QR of a1 (l >= n rows); Q is never
/// materialized. The diagonal is sign-normalized to be nonnegative, which
/// makes the factor the unique positive-diagonal one.
inline Matrix qr_r_factor(const ConstMatrixRef& a1) {
  cholqr::detail::require(a1.rows() >= a1.cols(), "qr_r_factor: need rows >= cols");
  Matrix work = a1;
  Eigen::HouseholderQR<Eigen::Ref<Matrix>> qr(work);
  const Index n = a1.cols();
  Matrix r = Matrix::Zero(n, n);
  r.triangularView<Eigen::Upper>() = work.topRows(n).triangularView<Eigen::Upper>();
  detail::normalize_r_sign(r);
  return r;
}

struct ThinQr {
  Matrix q;  // m x n, orthonormal columns
  Matrix r;  // n x n upper triangular, nonnegative diagonal
};

/// Thin Householder QR with sign-normalized R (and Q adjusted to match).
inline ThinQr householder_qr_thin(const ConstMatrixRef& a) {
  cholqr::detail::require(a.rows() >= a.cols(), "householder_qr_thin: need rows >= cols");
  const Index m = a.rows(), n = a.cols();
  Matrix work = a;
  Eigen::HouseholderQR<Eigen::Ref<Matrix>> qr(work);
  ThinQr out;
  out.r = Matrix::Zero(n, n);
  out.r.triangularView<Eigen::Upper>() = work.topRows(n).triangularView<Eigen::Upper>();
  out.q = Matrix::Identity(m, n);
  qr.householderQ().applyThisOnTheLeft(out.q);
  for (Index i = 0; i < n; ++i) {
    if (out.r(i, i) < 0.0) {
      out.r.row(i).tail(n - i) = -out.r.row(i).tail(n - i);
      out.q.col(i) = -out.q.col(i);
    }
  }
  return out;
}

struct LuFactorization {
  Matrix packed;            // l x n, unit-lower multipliers below U
  std::vector<Index> perm;  // row i of the permuted input is input row perm[i]
};

/// Row-partially-pivoted LU of a rectangular l x n matrix (l >= n).
inline LuFactorization lu_decompose(const ConstMatrixRef& a1) {
  cholqr::detail::require(a1.rows() >= a1.cols(), "lu_decompose: need rows >= cols");
  const Index l = a1.rows(), n = a1.cols();
  LuFactorization f;
  f.packed = a1;
  f.perm.resize(static_cast<std::size_t>(l));
  for (Index i = 0; i < l; ++i) f.perm[static_cast<std::size_t>(i)] = i;
  Matrix& w = f.packed;
  for (Index j = 0; j < n; ++j) {
    Index piv = j;
    double best = std::abs(w(j, j));
    for (Index i = j + 1; i < l; ++i) {
      const double v = std::abs(w(i, j));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (w(piv, j) == 0.0) throw SingularTriangular(j);
    if (piv != j) {
      w.row(j).swap(w.row(piv));
      std::swap(f.perm[static_cast<std::size_t>(j)], f.perm[static_cast<std::size_t>(piv)]);
    }
    const double d = w(j, j);
    for (Index i = j + 1; i < l; ++i) {
      const double mult = w(i, j) / d;
      w(i, j) = mult;
      if (mult != 0.0) w.row(i).tail(n - j - 1) -= mult * w.row(j).tail(n - j - 1);
    }
  }
  return f;
}

/// Leading n x n upper factor U of a row-partially-pivoted LU of a1.
inline Matrix lu_u_factor(const ConstMatrixRef& a1) {
  const LuFactorization f = lu_decompose(a1);
  const Index n = a1.cols();
  Matrix u = Matrix::Zero(n, n);
  u.triangularView<Eigen::Upper>() = f.packed.topRows(n).triangularView<Eigen::Upper>();
  return u;
}

struct JacobiSvd {
  Matrix u;      // m x n, orthonormal columns (zero columns where sigma == 0)
  Vector sigma;  // descending, nonnegative
  Matrix v;      // n x n orthogonal
};

/// Full thin SVD of a tall matrix (m >= n) by one-sided Jacobi with
/// accumulated rotations. Same sweep scheme and cap as svd_values.
JacobiSvd svd_jacobi(const ConstMatrixRef& m_in);

/// Singular values in descending order via one-sided Jacobi on the columns of
/// M (or M^T when M is wide). Intended for min(m, n) <= 512 diagnostics work;
/// throws NoConvergence after 100 sweeps.
template <typename Derived>
Vector svd_values(const Eigen::MatrixBase<Derived>& m_in) {
  constexpr int kMaxSweeps = 100;
  Eigen::MatrixXd w;
  if (m_in.rows() >= m_in.cols())
    w = m_in;
  else
    w = m_in.transpose();
  const Index c = w.cols();
  const double tol = 10.0 * kUnitRoundoff * std::sqrt(static_cast<double>(w.rows()));
  bool converged = (c <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (Index p = 0; p < c - 1; ++p) {
      for (Index q = p + 1; q < c; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (Index i = 0; i < w.rows(); ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = sn * wp + cs * wq;
        }
      }
    }
  }
  if (!converged) throw NoConvergence(kMaxSweeps);
  Vector sv(c);
  for (Index j = 0; j < c; ++j) sv(j) = w.col(j).norm();
  std::sort(sv.data(), sv.data() + c, std::greater<double>());
  return sv;
}

inline JacobiSvd svd_jacobi(const ConstMatrixRef& m_in) {
  cholqr::detail::require(m_in.rows() >= m_in.cols(), "svd_jacobi: need rows >= cols");
  constexpr int kMaxSweeps = 100;
  const Index rows = m_in.rows(), c = m_in.cols();
  Eigen::MatrixXd w = m_in;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(c, c);
  const double tol = 10.0 * kUnitRoundoff * std::sqrt(static_cast<double>(rows));
  bool converged = (c <= 1);
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    converged = true;
    for (Index p = 0; p < c - 1; ++p) {
      for (Index q = p + 1; q < c; ++q) {
        const double alpha = w.col(p).squaredNorm();
        const double beta = w.col(q).squaredNorm();
        const double gamma = w.col(p).dot(w.col(q));
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta)) continue;
        converged = false;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = ((zeta >= 0.0) ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (Index i = 0; i < rows; ++i) {
          const double wp = w(i, p), wq = w(i, q);
          w(i, p) = cs * wp - sn * wq;
          w(i, q) = sn * wp + cs * wq;
        }
        for (Index i = 0; i < c; ++i) {
          const double vp = v(i, p), vq = v(i, q);
          v(i, p) = cs * vp - sn * vq;
          v(i, q) = sn * vp + cs * vq;
        }
      }
    }
  }
  if (!converged) throw NoConvergence(kMaxSweeps);

  std::vector<Index> order(static_cast<std::size_t>(c));
  Vector norms(c);
  for (Index j = 0; j < c; ++j) {
    order[static_cast<std::size_t>(j)] = j;
    norms(j) = w.col(j).norm();
  }
  std::sort(order.begin(), order.end(),
            [&](Index a, Index b) { return norms(a) > norms(b); });

  JacobiSvd out;
  out.u.resize(rows, c);
  out.v.resize(c, c);
  out.sigma.resize(c);
  for (Index j = 0; j < c; ++j) {
    const Index src = order[static_cast<std::size_t>(j)];
    const double s = norms(src);
    out.sigma(j) = s;
    out.v.col(j) = v.col(src);
    if (s > 0.0)
      out.u.col(j) = w.col(src) / s;
    else
      out.u.col(j).setZero();
  }
  return out;
}

}  // namespace cholqr::kernels
