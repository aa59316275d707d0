#include "cholqr/matgen.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "cholqr/errors.hpp"
#include "cholqr/rng.hpp"

namespace cholqr::matgen {

Matrix random_orthogonal(Index rows, Index cols, std::uint64_t seed) {
  detail::require(rows >= cols && cols >= 1, "random_orthogonal: need rows >= cols >= 1");
  Matrix work = rng::gaussian_matrix(rows, cols, seed);
  Eigen::HouseholderQR<Eigen::Ref<Matrix>> qr(work);
  Matrix q = Matrix::Identity(rows, cols);
  qr.householderQ().applyThisOnTheLeft(q);
  return q;
}

Matrix synthesize(const MatrixSpec& spec) {
  detail::require(spec.m >= spec.n && spec.n >= 1, "synthesize: need m >= n >= 1");
  detail::require(spec.kappa >= 1.0, "synthesize: need kappa >= 1");
  detail::require(spec.n >= 2 || spec.kappa == 1.0, "synthesize: n == 1 forces kappa == 1");

  const Index m = spec.m, n = spec.n;
  Vector sigma(n);
  sigma(0) = 1.0;
  const double log_kappa = std::log(spec.kappa);
  for (Index i = 1; i < n; ++i)
    sigma(i) = std::exp(-log_kappa * static_cast<double>(i) / static_cast<double>(n - 1));

  const Matrix v = random_orthogonal(n, n, rng::derive(spec.seed, 1));
  const Matrix svt = sigma.asDiagonal() * v.transpose();

  // U is overwritten panel by panel with U * svt to avoid a second m x n buffer.
  Matrix a = random_orthogonal(m, n, rng::derive(spec.seed, 0));
  constexpr Index kPanel = 4096;
  Matrix tmp;
  for (Index p0 = 0; p0 < m; p0 += kPanel) {
    const Index len = std::min(m - p0, kPanel);
    tmp.noalias() = a.middleRows(p0, len) * svt;
    a.middleRows(p0, len) = tmp;
  }
  return a;
}

Matrix embedded_identity(Index m, Index n, std::uint64_t seed) {
  detail::require(m >= n && n >= 1, "embedded_identity: need m >= n >= 1");
  Matrix a = Matrix::Zero(m, n);
  a.topRows(n) = Matrix::Identity(n, n);
  if (m > n) a.bottomRows(m - n) = 1e-8 * rng::gaussian_matrix(m - n, n, seed);
  return a;
}

}  // namespace cholqr::matgen
