#include "cholqr/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "cholqr/errors.hpp"

namespace cholqr::sketch {

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Uniform: return "uniform";
    case Strategy::Leverage: return "leverage";
    case Strategy::Gaussian: return "gaussian";
  }
  return "?";
}

Index SketchConfig::resolved_size(Index m, Index n) const {
  Index l = size > 0 ? size : static_cast<Index>(std::ceil(rate * static_cast<double>(n)));
  return std::clamp(l, n, m);
}

namespace {

std::vector<Index> draw_indices(Index m, Index l, bool without_replacement,
                                rng::Stream& stream) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(l));
  if (!without_replacement) {
    for (Index k = 0; k < l; ++k) idx.push_back(stream.next_index(m));
  } else {
    std::unordered_set<Index> seen;
    while (static_cast<Index>(idx.size()) < l) {
      const Index i = stream.next_index(m);
      if (seen.insert(i).second) idx.push_back(i);
    }
  }
  return idx;
}

}  // namespace

Sketch sample_rows_uniform(const ConstMatrixRef& a, const SketchConfig& cfg,
                           rng::Stream& stream) {
  const Index m = a.rows(), n = a.cols();
  const Index l = cfg.resolved_size(m, n);
  Sketch s;
  s.strategy = Strategy::Uniform;
  s.indices = draw_indices(m, l, cfg.without_replacement, stream);
  s.a1.resize(l, n);
  for (Index k = 0; k < l; ++k) s.a1.row(k) = a.row(s.indices[static_cast<std::size_t>(k)]);
  return s;
}

Sketch sample_rows_leverage(const ConstMatrixRef& a, const ConstMatrixRef& q,
                            const SketchConfig& cfg, rng::Stream& stream) {
  const Index m = a.rows(), n = a.cols();
  detail::require(q.rows() == m && q.cols() == n, "leverage: Q must match A's shape");
  const Index l = cfg.resolved_size(m, n);

  Vector prob(m);
  for (Index i = 0; i < m; ++i) prob(i) = q.row(i).squaredNorm() / static_cast<double>(n);
  detail::require(std::abs(prob.sum() - 1.0) <= 1e-10,
                  "leverage: row probabilities do not sum to 1 (Q not orthonormal enough)");

  Vector cum(m);
  double acc = 0.0;
  for (Index i = 0; i < m; ++i) {
    acc += prob(i);
    cum(i) = acc;
  }

  Sketch s;
  s.strategy = Strategy::Leverage;
  s.indices.reserve(static_cast<std::size_t>(l));
  s.weights.reserve(static_cast<std::size_t>(l));
  s.a1.resize(l, n);
  for (Index k = 0; k < l; ++k) {
    const double u = stream.next_unit() * acc;
    const Index idx = static_cast<Index>(
        std::upper_bound(cum.data(), cum.data() + m, u) - cum.data());
    const Index i = std::min(idx, m - 1);
    if (prob(i) == 0.0) throw ZeroLeverageRow(i);
    const double w = 1.0 / std::sqrt(prob(i) * static_cast<double>(n));
    s.indices.push_back(i);
    s.weights.push_back(w);
    s.a1.row(k) = w * a.row(i);
  }
  return s;
}

Sketch sketch_gaussian(const ConstMatrixRef& a, const SketchConfig& cfg, rng::Stream& stream) {
  const Index m = a.rows(), n = a.cols();
  const Index l = cfg.resolved_size(m, n);
  const std::uint64_t seed = stream.seed();

  Sketch s;
  s.strategy = Strategy::Gaussian;
  s.projection_seed = seed;
  s.a1 = Matrix::Zero(l, n);

  // Omega is l x m and never stored whole: entry (i, j) sits at counter
  // position i*m + j, so any column chunk can be generated independently.
  constexpr Index kChunk = 2048;
  Matrix omega(l, std::min(m, kChunk));
  for (Index j0 = 0; j0 < m; j0 += kChunk) {
    const Index len = std::min(m - j0, kChunk);
    for (Index i = 0; i < l; ++i)
      for (Index jj = 0; jj < len; ++jj)
        omega(i, jj) = rng::gaussian_at(seed, static_cast<std::uint64_t>(i * m + j0 + jj));
    s.a1.noalias() += omega.leftCols(len) * a.middleRows(j0, len);
  }
  return s;
}

Sketch make_sketch(const ConstMatrixRef& a, const SketchConfig& cfg, rng::Stream& stream) {
  switch (cfg.strategy) {
    case Strategy::Uniform: return sample_rows_uniform(a, cfg, stream);
    case Strategy::Gaussian: return sketch_gaussian(a, cfg, stream);
    case Strategy::Leverage:
      throw std::invalid_argument(
          "leverage sampling needs an oracle Q; call sample_rows_leverage directly");
  }
  throw std::invalid_argument("unknown sketch strategy");
}

Matrix reconstruct_extraction(const ConstMatrixRef& a, const Sketch& s) {
  detail::require(s.strategy != Strategy::Gaussian,
                  "reconstruct_extraction: gaussian sketches are not row extractions");
  const Index l = static_cast<Index>(s.indices.size());
  Matrix a1(l, a.cols());
  for (Index k = 0; k < l; ++k) {
    const Index i = s.indices[static_cast<std::size_t>(k)];
    if (s.strategy == Strategy::Leverage)
      a1.row(k) = s.weights[static_cast<std::size_t>(k)] * a.row(i);
    else
      a1.row(k) = a.row(i);
  }
  return a1;
}

}  // namespace cholqr::sketch
