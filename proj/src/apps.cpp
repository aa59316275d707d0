#include "cholqr/apps.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cholqr/cholqr.hpp"
#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "cholqr/rng.hpp"
#include "engine.hpp"

namespace cholqr::apps {

void SparseMatrixCsr::validate() const {
  detail::require(rows >= 0 && cols >= 0, "csr: negative dimensions");
  detail::require(static_cast<Index>(row_ptr.size()) == rows + 1, "csr: row_ptr size");
  detail::require(row_ptr.front() == 0, "csr: row_ptr must start at 0");
  detail::require(row_ptr.back() == nnz(), "csr: row_ptr must end at nnz");
  detail::require(col_idx.size() == values.size(), "csr: col_idx/values size mismatch");
  for (Index i = 0; i < rows; ++i) {
    detail::require(row_ptr[static_cast<std::size_t>(i)] <= row_ptr[static_cast<std::size_t>(i) + 1],
                    "csr: row_ptr not nondecreasing");
    for (Index k = row_ptr[static_cast<std::size_t>(i)]; k < row_ptr[static_cast<std::size_t>(i) + 1];
         ++k) {
      const Index c = col_idx[static_cast<std::size_t>(k)];
      detail::require(c >= 0 && c < cols, "csr: column index out of bounds");
      if (k > row_ptr[static_cast<std::size_t>(i)])
        detail::require(col_idx[static_cast<std::size_t>(k) - 1] < c,
                        "csr: columns not sorted within a row");
    }
  }
}

Matrix SparseMatrixCsr::multiply(const ConstMatrixRef& x, int workers) const {
  detail::require(x.rows() == cols, "csr multiply: inner dimension mismatch");
  Matrix y = Matrix::Zero(rows, x.cols());
  cholqr::detail::run_on_workers(std::max(workers, 1), [&](int w) {
    const int p = std::max(workers, 1);
    const Index lo = rows * w / p, hi = rows * (w + 1) / p;
    for (Index i = lo; i < hi; ++i)
      for (Index k = row_ptr[static_cast<std::size_t>(i)];
           k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        y.row(i) += values[static_cast<std::size_t>(k)] *
                    x.row(col_idx[static_cast<std::size_t>(k)]);
  });
  return y;
}

Matrix SparseMatrixCsr::multiply_transposed(const ConstMatrixRef& x, int workers) const {
  detail::require(x.rows() == rows, "csr multiply_transposed: inner dimension mismatch");
  // Column-parallel form would need scatter locks; with the row-major operand
  // a per-worker accumulator keeps this deterministic: workers stride rows,
  // partial results are combined in worker order.
  const int p = std::max(workers, 1);
  std::vector<Matrix> parts(static_cast<std::size_t>(p));
  cholqr::detail::run_on_workers(p, [&](int w) {
    Matrix acc = Matrix::Zero(cols, x.cols());
    const Index lo = rows * w / p, hi = rows * (w + 1) / p;
    for (Index i = lo; i < hi; ++i)
      for (Index k = row_ptr[static_cast<std::size_t>(i)];
           k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
        acc.row(col_idx[static_cast<std::size_t>(k)]) +=
            values[static_cast<std::size_t>(k)] * x.row(i);
    parts[static_cast<std::size_t>(w)] = std::move(acc);
  });
  Matrix y = std::move(parts[0]);
  for (int w = 1; w < p; ++w) y += parts[static_cast<std::size_t>(w)];
  return y;
}

SparseMatrixCsr csr_from_triplets(Index rows, Index cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseMatrixCsr m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(static_cast<std::size_t>(rows) + 1, 0);
  m.col_idx.reserve(entries.size());
  m.values.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const Index i = entries[k].row, j = entries[k].col;
    detail::require(i >= 0 && i < rows && j >= 0 && j < cols, "triplet out of bounds");
    double v = 0.0;
    while (k < entries.size() && entries[k].row == i && entries[k].col == j) v += entries[k++].value;
    m.col_idx.push_back(j);
    m.values.push_back(v);
    m.row_ptr[static_cast<std::size_t>(i) + 1] += 1;
  }
  for (Index i = 0; i < rows; ++i)
    m.row_ptr[static_cast<std::size_t>(i) + 1] += m.row_ptr[static_cast<std::size_t>(i)];
  m.validate();
  return m;
}

SparseMatrixCsr load_matrix_market(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open Matrix Market file: " + path);
  std::string line;
  if (!std::getline(is, line)) throw Error("empty Matrix Market file: " + path);
  {
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    auto lower = [](std::string s) {
      std::transform(s.begin(), s.end(), s.begin(),
                     [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
      return s;
    };
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" ||
        lower(format) != "coordinate" || lower(field) != "real" ||
        lower(symmetry) != "general")
      throw Error("unsupported Matrix Market header (need 'matrix coordinate real general'): " +
                  line);
  }
  while (std::getline(is, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  Index rows = 0, cols = 0;
  long long nnz = 0;
  {
    std::istringstream sizes(line);
    if (!(sizes >> rows >> cols >> nnz)) throw Error("bad Matrix Market size line: " + line);
  }
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  for (long long k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(is >> i >> j >> v)) throw Error("truncated Matrix Market file: " + path);
    entries.push_back({i - 1, j - 1, v});  // 1-based on disk
  }
  return csr_from_triplets(rows, cols, std::move(entries));
}

SparseMatrixCsr random_sparse(Index rows, Index cols, double density, std::uint64_t seed) {
  detail::require(density > 0.0 && density <= 1.0, "random_sparse: density must be in (0,1]");
  const auto target = static_cast<std::size_t>(
      std::llround(density * static_cast<double>(rows) * static_cast<double>(cols)));
  rng::Stream stream(seed);
  std::vector<Triplet> entries;
  entries.reserve(target);
  for (std::size_t k = 0; k < target; ++k) {
    const Index i = stream.next_index(rows);
    const Index j = stream.next_index(cols);
    entries.push_back({i, j, stream.next_gaussian()});
  }
  return csr_from_triplets(rows, cols, std::move(entries));
}

const char* orth_name(Orth o) {
  switch (o) {
    case Orth::HouseholderQr: return "qr";
    case Orth::RqrCholeskyQr: return "rqr";
    case Orth::CholeskyQr2: return "cholqr2";
  }
  return "?";
}

namespace {

Matrix orthonormalize(const Matrix& y, Orth orth, std::uint64_t seed, int call_counter,
                      int workers, std::vector<double>& times_ms) {
  const auto t0 = std::chrono::steady_clock::now();
  Matrix q;
  switch (orth) {
    case Orth::HouseholderQr:
      q = kernels::householder_qr_thin(y).q;
      break;
    case Orth::RqrCholeskyQr: {
      sketch::SketchConfig cfg;
      cfg.rate = 2.0;
      // fresh rows for every orthogonalization call
      cfg.seed = rng::derive(seed, 0xA110 + static_cast<std::uint64_t>(call_counter));
      Options opts;
      opts.r_less = true;
      opts.workers = workers;
      q = rqr_cholesky_qr(y, cfg, opts).q;
      break;
    }
    case Orth::CholeskyQr2: {
      Options opts;
      opts.r_less = true;
      opts.workers = workers;
      q = cholesky_qr2(y, opts).q;
      break;
    }
  }
  const auto t1 = std::chrono::steady_clock::now();
  times_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  return q;
}

}  // namespace

RsvdResult rsvd_power(const SparseMatrixCsr& a, Index k, int power_iters, Orth orth,
                      std::uint64_t seed, int workers) {
  a.validate();
  if (k < 1 || k > std::min(a.rows, a.cols))
    throw DimensionMismatch("rsvd_power: need 1 <= k <= min(m, n)");
  detail::require(power_iters >= 0, "rsvd_power: power_iters must be >= 0");

  RsvdResult res;
  res.iterations = power_iters;
  int calls = 0;

  const Matrix x = rng::gaussian_matrix(a.cols, k, rng::derive(seed, 0));
  Matrix q = orthonormalize(a.multiply(x, workers), orth, seed, calls++, workers,
                            res.per_iteration_orth_time);
  for (int it = 0; it < power_iters; ++it) {
    const Matrix w = orthonormalize(a.multiply_transposed(q, workers), orth, seed, calls++,
                                    workers, res.per_iteration_orth_time);
    q = orthonormalize(a.multiply(w, workers), orth, seed, calls++, workers,
                       res.per_iteration_orth_time);
  }

  const Matrix y_small = a.multiply_transposed(q, workers);  // n x k
  const kernels::JacobiSvd svd = kernels::svd_jacobi(y_small);
  res.sigma = svd.sigma;
  res.v = svd.u;                            // n x k, orthonormal
  res.u = a.multiply(svd.u, workers);       // U = A U~, non-orthogonal by construction
  return res;
}

double u_sigma_consistency(const RsvdResult& r) {
  Matrix g = r.u.transpose() * r.u;
  g.diagonal() -= r.sigma.cwiseProduct(r.sigma);
  return g.norm();
}

Vector ls_solve(const ConstMatrixRef& a, const Vector& b, const sketch::SketchConfig& cfg) {
  detail::require(b.size() == a.rows(), "ls_solve: b length must equal rows of A");
  detail::require_finite(a, "A");

  // Sketch-and-factor with the usual degenerate-draw retry.
  Matrix r1;
  const Index base_l = cfg.resolved_size(a.rows(), a.cols());
  for (int attempt = 0;; ++attempt) {
    sketch::SketchConfig try_cfg = cfg;
    try_cfg.size = std::min<Index>(
        a.rows(), static_cast<Index>(std::llround(static_cast<double>(base_l) *
                                                  std::pow(cfg.retry_growth, attempt))));
    rng::Stream stream(attempt == 0 ? cfg.seed : rng::derive(cfg.seed, attempt));
    const sketch::Sketch sk = sketch::make_sketch(a, try_cfg, stream);
    r1 = kernels::qr_r_factor(sk.a1);
    Index bad = -1;
    for (Index i = 0; i < r1.rows(); ++i)
      if (r1(i, i) == 0.0 || !std::isfinite(r1(i, i))) bad = i;
    if (bad < 0) break;
    if (attempt >= cfg.max_retries) throw SingularTriangular(bad);
  }

  const Matrix bmat = kernels::right_trisolve(a, r1);
  const Matrix rb = kernels::cholesky_upper(kernels::gram(bmat));
  const Vector c = bmat.transpose() * b;
  const Vector y = kernels::solve_upper(rb, kernels::solve_upper_transposed(rb, c));
  return kernels::solve_upper(r1, y);
}

Vector ls_solve_normal(const ConstMatrixRef& a, const Vector& b) {
  detail::require(b.size() == a.rows(), "ls_solve_normal: b length must equal rows of A");
  const Matrix r = kernels::cholesky_upper(kernels::gram(a));
  const Vector c = a.transpose() * b;
  return kernels::solve_upper(r, kernels::solve_upper_transposed(r, c));
}

}  // namespace cholqr::apps
