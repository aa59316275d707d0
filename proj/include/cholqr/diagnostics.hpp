#pragma once

#include "cholqr/types.hpp"

namespace cholqr::diagnostics {

/// ||Q^T Q - I||_F.
double orthogonality_error(const ConstMatrixRef& q);

/// ||A - Q R||_F / ||A||_F, evaluated over row panels so no m x n temporary
/// is allocated. Throws ZeroMatrix when ||A||_F == 0.
double residual_error(const ConstMatrixRef& a, const ConstMatrixRef& q, const ConstMatrixRef& r);

/// sigma_max / sigma_min under the 2-norm. Tall inputs are routed through a
/// Q-less QR first so the SVD only ever sees an n x n factor. Throws
/// RankDeficient when sigma_min < 1e3 * u * sigma_max.
double cond2(const ConstMatrixRef& m);

/// Coherence theta(Q) = max_i ||Q(i,:)||^2, in [n/m, 1] for orthonormal Q.
double theta(const ConstMatrixRef& q);

/// Evaluated probabilistic bound on cond(X) for a sketching strategy.
struct BoundReport {
  double epsilon = 0.0;
  double delta = 0.0;
  /// Upper bound on P[cond(X) >= cond_threshold]; may exceed 1 (vacuous).
  double tail_probability = 0.0;
  double cond_threshold = 0.0;
};

/// Matrix-Chernoff tail for uniform row sampling:
///   P[cond(X) >= sqrt((1+delta)/(1-eps))]
///     <= n [ (e^-eps/(1-eps)^(1-eps))^t + (e^delta/(1+delta)^(1+delta))^t ]
/// with exponent t = l / (m theta(Q)). Evaluated in log space.
BoundReport chernoff_tail_uniform(Index n, Index l, Index m, double theta_q, double eps,
                                  double delta);

/// Same bound for leverage-score sampling; the exponent sharpens to l/n.
BoundReport chernoff_tail_leverage(Index n, Index l, double eps, double delta);

/// Gaussian-ensemble tail (l > n):
///   P[cond(X) >= (3+sqrt(n/l))/(1-sqrt(n/l))] <= 2 exp(-(sqrt(l)-sqrt(n))^2/8).
BoundReport gaussian_tail(Index n, Index l);

/// Leading-order flop counts for computing the Q factor.
struct FlopEstimate {
  double total = 0.0;
  double critical_path = 0.0;  // per-process cost with p processes
};

FlopEstimate flop_estimate(Method method, Index m, Index n, Index l, int p);

/// Inflation of cond(X) under alpha-stable preconditioning and beta-stable
/// triangular solves: gamma = 2(beta cond(A) + alpha cond(A1)) and
/// cond(X^) <= (1+gamma)/(1-gamma) cond(X). Throws HypothesisViolated when
/// the stated inequalities fail.
struct StabilityBound {
  double gamma = 0.0;
  double cond_inflation = 0.0;  // (1+gamma)/(1-gamma) * cond(X)
};

StabilityBound stability_gamma(double alpha, double beta, double cond_a, double cond_a1,
                               double cond_x);

}  // namespace cholqr::diagnostics
