#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "cholqr/apps.hpp"
#include "cholqr/diagnostics.hpp"
#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "cholqr/matgen.hpp"
#include "cholqr/rng.hpp"

using namespace cholqr;
using apps::SparseMatrixCsr;

namespace {

Matrix to_dense(const SparseMatrixCsr& a) {
  Matrix d = Matrix::Zero(a.rows, a.cols);
  for (Index i = 0; i < a.rows; ++i)
    for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
         k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
      d(i, a.col_idx[static_cast<std::size_t>(k)]) = a.values[static_cast<std::size_t>(k)];
  return d;
}

SparseMatrixCsr sparse_diag(const std::vector<double>& d) {
  std::vector<apps::Triplet> trips;
  for (std::size_t i = 0; i < d.size(); ++i)
    trips.push_back({static_cast<Index>(i), static_cast<Index>(i), d[i]});
  const Index n = static_cast<Index>(d.size());
  return apps::csr_from_triplets(n, n, trips);
}

}  // namespace

TEST_CASE("csr_from_triplets: duplicates summed, invariants hold") {
  std::vector<apps::Triplet> trips = {{0, 1, 2.0}, {0, 1, 3.0}, {1, 0, -1.0}, {0, 0, 1.0}};
  const SparseMatrixCsr a = apps::csr_from_triplets(2, 2, trips);
  a.validate();
  CHECK(a.nnz() == 3);
  Matrix expect(2, 2);
  expect << 1, 5, -1, 0;
  CHECK((to_dense(a) - expect).norm() == 0.0);
}

TEST_CASE("csr validate rejects broken structures") {
  SparseMatrixCsr bad;
  bad.rows = 2;
  bad.cols = 2;
  bad.row_ptr = {0, 1, 2};
  bad.col_idx = {0, 5};  // out of bounds
  bad.values = {1.0, 2.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("matrix market: 1-based round trip and header checks") {
  const std::string path = "test_mm.mtx";
  {
    std::ofstream os(path);
    os << "%%MatrixMarket matrix coordinate real general\n"
       << "% a comment\n"
       << "3 2 3\n"
       << "1 1 1.5\n"
       << "3 2 -2.25\n"
       << "2 1 4.0\n";
  }
  const SparseMatrixCsr a = apps::load_matrix_market(path);
  CHECK(a.rows == 3);
  CHECK(a.cols == 2);
  Matrix expect = Matrix::Zero(3, 2);
  expect(0, 0) = 1.5;
  expect(2, 1) = -2.25;
  expect(1, 0) = 4.0;
  CHECK((to_dense(a) - expect).norm() == 0.0);
  std::remove(path.c_str());

  const std::string bad_path = "test_mm_bad.mtx";
  {
    std::ofstream os(bad_path);
    os << "%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 0 0\n";
  }
  CHECK_THROWS_AS((void)apps::load_matrix_market(bad_path), Error);
  std::remove(bad_path.c_str());
}

TEST_CASE("sparse products match the dense oracle") {
  const SparseMatrixCsr a = apps::random_sparse(60, 40, 0.05, 5);
  a.validate();
  const Matrix d = to_dense(a);
  const Matrix x = rng::gaussian_matrix(40, 3, 6);
  const Matrix y = rng::gaussian_matrix(60, 3, 7);
  CHECK((a.multiply(x) - d * x).norm() <= 1e-13 * (d * x).norm());
  CHECK((a.multiply_transposed(y) - d.transpose() * y).norm() <=
        1e-13 * (d.transpose() * y).norm());
  // worker count must not change values for a fixed count
  CHECK((a.multiply(x, 3) - a.multiply(x, 3)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rsvd_power: full-rank capture of a diagonal matrix is exact") {
  const SparseMatrixCsr a = sparse_diag({5, 4, 3, 2, 1});
  const apps::RsvdResult r = apps::rsvd_power(a, 5, 1, apps::Orth::HouseholderQr, 3);
  for (Index i = 0; i < 5; ++i)
    CHECK(r.sigma(i) == doctest::Approx(5.0 - static_cast<double>(i)).epsilon(1e-8));
}

TEST_CASE("rsvd_power: diagonal matrix, k = 2, two power rounds") {
  const SparseMatrixCsr a = sparse_diag({5, 4, 3, 2, 1});
  const apps::RsvdResult r = apps::rsvd_power(a, 2, 2, apps::Orth::HouseholderQr, 4);
  // the captured subspace still carries an O((3/4)^5) tail at K=2, so the
  // top singular values are approximate, not exact
  CHECK(r.sigma(0) == doctest::Approx(5.0).epsilon(2e-2));
  CHECK(r.sigma(1) == doctest::Approx(4.0).epsilon(2e-1));
  CHECK(r.sigma(0) >= r.sigma(1));
  CHECK(r.iterations == 2);
  CHECK(r.per_iteration_orth_time.size() == 5);  // 1 + 2K orthogonalizations
  CHECK(diagnostics::orthogonality_error(r.v) <= 1e-12);
}

TEST_CASE("rsvd_power: K = 0 reduces to the vanilla sketch") {
  const SparseMatrixCsr a = apps::random_sparse(300, 80, 0.05, 8);
  const apps::RsvdResult r = apps::rsvd_power(a, 10, 0, apps::Orth::HouseholderQr, 9);
  CHECK(r.per_iteration_orth_time.size() == 1);
  CHECK(r.sigma.size() == 10);
  CHECK((r.sigma.head(9) - r.sigma.tail(9)).minCoeff() >= 0.0);  // nonincreasing
}

TEST_CASE("rsvd_power: orthogonalizer choice does not change the math") {
  const SparseMatrixCsr a = apps::random_sparse(2000, 500, 0.01, 10);
  const apps::RsvdResult qr = apps::rsvd_power(a, 20, 3, apps::Orth::HouseholderQr, 11);
  const apps::RsvdResult rqr = apps::rsvd_power(a, 20, 3, apps::Orth::RqrCholeskyQr, 11);
  const apps::RsvdResult c2 = apps::rsvd_power(a, 20, 3, apps::Orth::CholeskyQr2, 11);
  for (Index i = 0; i < 20; ++i) {
    CHECK(rqr.sigma(i) == doctest::Approx(qr.sigma(i)).epsilon(1e-6));
    CHECK(c2.sigma(i) == doctest::Approx(qr.sigma(i)).epsilon(1e-6));
  }
  // Top of the spectrum tracks a dense SVD oracle. An i.i.d. sparse matrix
  // has a gapless bulk edge, so three power rounds resolve the leading
  // values only to a few percent.
  const Vector dense_sv = kernels::svd_values(to_dense(a));
  for (Index i = 0; i < 5; ++i) {
    CHECK(qr.sigma(i) == doctest::Approx(dense_sv(i)).epsilon(5e-2));
    CHECK(qr.sigma(i) <= dense_sv(i) * (1.0 + 1e-12));  // Ritz values from below
  }
}

TEST_CASE("rsvd_power: U = A U~ is sigma^2-consistent, not orthogonal") {
  const SparseMatrixCsr a = apps::random_sparse(500, 200, 0.05, 12);
  const apps::RsvdResult r = apps::rsvd_power(a, 8, 3, apps::Orth::HouseholderQr, 13);
  const double gap = apps::u_sigma_consistency(r);
  const double scale = r.sigma(0) * r.sigma(0);
  CHECK(gap <= 0.1 * scale);           // U^T U tracks diag(sigma^2)
  CHECK(diagnostics::orthogonality_error(r.u) > 1.0);  // and is far from I
}

TEST_CASE("ls_solve: orthogonal system solves to A^T b") {
  const Matrix a = matgen::random_orthogonal(500, 20, 14);
  const Vector b = rng::gaussian_matrix(500, 1, 15);
  sketch::SketchConfig cfg;
  cfg.seed = 16;
  const Vector x = apps::ls_solve(a, b, cfg);
  CHECK((x - a.transpose() * b).norm() <= 1e-12 * b.norm());
}

TEST_CASE("ls_solve: planted solution at kappa = 1e6, normal equations lose") {
  const Matrix a = matgen::synthesize({2000, 50, 1e6, 17});
  const Vector x_star = rng::gaussian_matrix(50, 1, 18);
  const Vector b = a * x_star;
  sketch::SketchConfig cfg;
  cfg.seed = 19;
  const Vector x = apps::ls_solve(a, b, cfg);
  const double err = (x - x_star).norm() / x_star.norm();
  CHECK(err <= 1e-8);

  const Vector x_raw = apps::ls_solve_normal(a, b);
  const double err_raw = (x_raw - x_star).norm() / x_star.norm();
  CHECK(err_raw >= 100.0 * err);
}

TEST_CASE("ls_solve: residual of the normal equations stays small") {
  const Matrix a = matgen::synthesize({1000, 30, 1e4, 20});
  const Vector b = rng::gaussian_matrix(1000, 1, 21);  // inconsistent system
  sketch::SketchConfig cfg;
  cfg.seed = 22;
  const Vector x = apps::ls_solve(a, b, cfg);
  const Vector grad = a.transpose() * (a * x - b);
  CHECK(grad.norm() <= 1e-8 * b.norm());
}

TEST_CASE("rsvd_power: dimension checks") {
  const SparseMatrixCsr a = apps::random_sparse(50, 20, 0.1, 23);
  CHECK_THROWS_AS((void)apps::rsvd_power(a, 21, 1, apps::Orth::HouseholderQr, 24),
                  DimensionMismatch);
}
