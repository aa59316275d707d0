#include "cholqr/diagnostics.hpp"

#include <cmath>

#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"

namespace cholqr::diagnostics {

double orthogonality_error(const ConstMatrixRef& q) {
  Matrix g = kernels::gram(q);
  g.diagonal().array() -= 1.0;
  return g.norm();
}

double residual_error(const ConstMatrixRef& a, const ConstMatrixRef& q, const ConstMatrixRef& r) {
  detail::require(a.rows() == q.rows() && a.cols() == r.cols() && q.cols() == r.rows(),
                  "residual_error: shape mismatch");
  const double norm_a = a.norm();
  if (norm_a == 0.0) throw ZeroMatrix();
  constexpr Index kPanel = 4096;
  double acc = 0.0;
  for (Index p0 = 0; p0 < a.rows(); p0 += kPanel) {
    const Index len = std::min(a.rows() - p0, kPanel);
    acc += (a.middleRows(p0, len) - q.middleRows(p0, len) * r).squaredNorm();
  }
  return std::sqrt(acc) / norm_a;
}

double cond2(const ConstMatrixRef& m) {
  detail::require_finite(m, "cond2 input");
  Vector sv;
  if (m.rows() > m.cols())
    sv = kernels::svd_values(kernels::qr_r_factor(m));
  else
    sv = kernels::svd_values(m);
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin < 1e3 * kUnitRoundoff * smax) throw RankDeficient(smin, smax);
  return smax / smin;
}

double theta(const ConstMatrixRef& q) {
  double best = 0.0;
  for (Index i = 0; i < q.rows(); ++i) best = std::max(best, q.row(i).squaredNorm());
  return best;
}

namespace {

/// log of the lower Chernoff factor e^-eps / (1-eps)^(1-eps).
double log_lower_factor(double eps) { return -eps - (1.0 - eps) * std::log1p(-eps); }

/// log of the upper Chernoff factor e^delta / (1+delta)^(1+delta).
double log_upper_factor(double delta) { return delta - (1.0 + delta) * std::log1p(delta); }

BoundReport chernoff_with_exponent(Index n, double exponent, double eps, double delta) {
  detail::require(eps > 0.0 && eps < 1.0, "chernoff: eps must be in (0,1)");
  detail::require(delta > 0.0, "chernoff: delta must be > 0");
  BoundReport b;
  b.epsilon = eps;
  b.delta = delta;
  b.cond_threshold = std::sqrt((1.0 + delta) / (1.0 - eps));
  const double log_n = std::log(static_cast<double>(n));
  b.tail_probability = std::exp(log_n + exponent * log_lower_factor(eps)) +
                       std::exp(log_n + exponent * log_upper_factor(delta));
  return b;
}

}  // namespace

BoundReport chernoff_tail_uniform(Index n, Index l, Index m, double theta_q, double eps,
                                  double delta) {
  detail::require(theta_q > 0.0 && theta_q <= 1.0 + 1e-12, "chernoff: theta must be in (0,1]");
  const double exponent =
      static_cast<double>(l) / (static_cast<double>(m) * theta_q);
  return chernoff_with_exponent(n, exponent, eps, delta);
}

BoundReport chernoff_tail_leverage(Index n, Index l, double eps, double delta) {
  const double exponent = static_cast<double>(l) / static_cast<double>(n);
  return chernoff_with_exponent(n, exponent, eps, delta);
}

BoundReport gaussian_tail(Index n, Index l) {
  detail::require(l > n, "gaussian_tail: need l > n");
  BoundReport b;
  const double ratio = std::sqrt(static_cast<double>(n) / static_cast<double>(l));
  b.cond_threshold = (3.0 + ratio) / (1.0 - ratio);
  const double gap = std::sqrt(static_cast<double>(l)) - std::sqrt(static_cast<double>(n));
  b.tail_probability = 2.0 * std::exp(-gap * gap / 8.0);
  return b;
}

FlopEstimate flop_estimate(Method method, Index m, Index n, Index l, int p) {
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double ld = static_cast<double>(l);
  const double pd = static_cast<double>(p);
  const double n2 = nd * nd;
  switch (method) {
    case Method::HouseholderQr:
      return {n2 * (4.0 * md - 4.0 / 3.0 * nd), n2 * (4.0 * md - 4.0 / 3.0 * nd)};
    case Method::CholeskyQr:
      return {n2 * (2.0 * md + nd / 3.0), n2 * (2.0 * md / pd + nd / 3.0)};
    case Method::CholeskyQr2:
      return {n2 * (4.0 * md + 2.0 / 3.0 * nd), n2 * (4.0 * md / pd + 2.0 / 3.0 * nd)};
    case Method::ShiftedCholeskyQr3:
      return {n2 * (6.0 * md + nd), n2 * (6.0 * md / pd + nd)};
    case Method::RluCholeskyQr:
      return {n2 * (3.0 * md + ld), n2 * (3.0 * md / pd + ld)};
    case Method::RqrCholeskyQr:
    case Method::RqrCholeskyQrGaussian:
      return {n2 * (3.0 * md + 4.0 * ld - nd), n2 * (3.0 * md / pd + 4.0 * ld - nd)};
  }
  throw std::invalid_argument("unknown method");
}

StabilityBound stability_gamma(double alpha, double beta, double cond_a, double cond_a1,
                               double cond_x) {
  if (!(beta * cond_a < 0.5)) throw HypothesisViolated("beta * cond(A) < 1/2");
  if (!(alpha * cond_a1 < 0.5)) throw HypothesisViolated("alpha * cond(A1) < 1/2");
  StabilityBound b;
  b.gamma = 2.0 * (beta * cond_a + alpha * cond_a1);
  if (!(b.gamma * cond_x < 1.0)) throw HypothesisViolated("gamma * cond(X) < 1");
  b.cond_inflation = (1.0 + b.gamma) / (1.0 - b.gamma) * cond_x;
  return b;
}

}  // namespace cholqr::diagnostics
