#include "engine.hpp"

#include <cmath>
#include <thread>

#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "cholqr/rng.hpp"

namespace cholqr::detail {

void run_on_workers(int workers, const std::function<void(int)>& fn) {
  if (workers <= 1) {
    fn(0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers - 1));
  for (int w = 1; w < workers; ++w) pool.emplace_back(fn, w);
  fn(0);
  for (auto& t : pool) t.join();
}

Matrix gram_of_view(const ConstMatrixRef& a, int workers) {
  const Index leaves = kernels::detail::gram_leaf_count(a.rows());
  std::vector<Matrix> slots(static_cast<std::size_t>(leaves));
  if (workers <= 1) {
    kernels::detail::gram_leaves(a, slots, 0, leaves);
  } else {
    run_on_workers(workers, [&](int w) {
      const Index lo = leaves * w / workers;
      const Index hi = leaves * (w + 1) / workers;
      kernels::detail::gram_leaves(a, slots, lo, hi);
    });
  }
  Matrix g = kernels::detail::gram_tree_combine(slots);
  g = g.selfadjointView<Eigen::Upper>();
  return g;
}

namespace {

/// Working state of one factorization: the tall matrix (A, then X, then Q)
/// lives in a partitioned buffer mutated in place.
class Engine {
 public:
  Engine(const ConstMatrixRef& a, int p, StageClock& clock)
      : work_(Matrix(a), p), clock_(clock) {}

  Index rows() const { return work_.rows(); }
  Index cols() const { return work_.cols(); }
  int workers() const { return work_.block_count(); }
  ConstMatrixRef current() const { return work_.full(); }

  Matrix gram() {
    ScopedStage t(clock_, Stage::Gram);
    return gram_of_view(work_.full(), workers());
  }

  void trisolve(const ConstMatrixRef& r) {
    ScopedStage t(clock_, Stage::Trisolve);
    for (Index j = 0; j < r.rows(); ++j)
      if (r(j, j) == 0.0) throw SingularTriangular(j);
    run_on_workers(workers(), [&](int w) {
      kernels::right_trisolve_in_place(work_.block(w), r);
    });
  }

  Matrix take() { return work_.take_storage(); }

 private:
  parexec::BlockedMatrix work_;
  StageClock& clock_;
};

/// One CholeskyQR pass on the engine's current matrix. Returns the R factor;
/// the engine's buffer holds the new Q. `shift` adds eps*I to the Grammian.
Matrix cholesky_pass(Engine& eng, StageClock& clock, StageReport& report,
                     std::optional<double> shift = std::nullopt) {
  Matrix g = eng.gram();
  report.stages.push_back({Stage::Gram, {}, {}, 0});
  Matrix r;
  {
    ScopedStage t(clock, Stage::Cholesky);
    if (shift) g.diagonal().array() += *shift;
    r = kernels::cholesky_upper(g);
  }
  report.stages.push_back({Stage::Cholesky, {}, shift, 0});
  eng.trisolve(r);
  report.stages.push_back({Stage::Trisolve, {}, {}, 0});
  return r;
}

double cond_estimate(const ConstMatrixRef& x) {
  const Matrix r = kernels::qr_r_factor(x);
  const Vector sv = kernels::svd_values(r);
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smin;
}

/// Upper-triangular product with the strict lower part pinned to exact zero.
Matrix triangular_product(const ConstMatrixRef& left, const ConstMatrixRef& right) {
  Matrix r = left * right;
  r.triangularView<Eigen::StrictlyLower>().setZero();
  return r;
}

void normalize_sign(QRFactorization& f) {
  for (Index i = 0; i < f.r.rows(); ++i) {
    if (f.r(i, i) < 0.0) {
      f.r.row(i).tail(f.r.cols() - i) = -f.r.row(i).tail(f.r.cols() - i);
      f.q.col(i) = -f.q.col(i);
    }
  }
}

bool degenerate_diagonal(const ConstMatrixRef& r, Index& where) {
  for (Index i = 0; i < r.rows(); ++i) {
    const double d = r(i, i);
    if (d == 0.0 || !std::isfinite(d)) {
      where = i;
      return true;
    }
  }
  return false;
}

RunOutput finish(QRFactorization fact, const StageClock& clock) {
  RunOutput out;
  out.fact = std::move(fact);
  out.stage_ms = clock.stage_ms();
  out.total_ms = clock.total_ms();
  return out;
}

RunOutput run_precond_impl(const ConstMatrixRef& a, const Preconditioner& precond,
                           const sketch::SketchConfig& cfg, int p, bool diagnostics,
                           bool r_less) {
  StageClock clock;
  const Index base_l = cfg.resolved_size(a.rows(), a.cols());

  // Sketch-and-factor loop. A draw is degenerate when its triangular factor
  // has a zero or non-finite diagonal entry, or when the CholeskyQR step on
  // X = A R~^{-1} breaks down: both signal rank-deficient sampling rather
  // than a failure of A itself. Degenerate draws are redone with
  // retry_growth times more rows under a derived seed, at most max_retries
  // times; the last failure propagates.
  for (int attempt = 0;; ++attempt) {
    sketch::SketchConfig try_cfg = cfg;
    try_cfg.size = std::min<Index>(
        a.rows(),
        static_cast<Index>(std::llround(static_cast<double>(base_l) *
                                        std::pow(cfg.retry_growth, attempt))));
    rng::Stream stream(attempt == 0 ? cfg.seed : rng::derive(cfg.seed, attempt));
    const bool last_attempt = attempt >= cfg.max_retries;

    QRFactorization fact;
    fact.report.r_less = r_less;

    sketch::Sketch sk;
    {
      ScopedStage t(clock, Stage::Sketch);
      sk = sketch::make_sketch(a, try_cfg, stream);
    }

    Matrix rtilde;
    {
      ScopedStage t(clock, Stage::Precondition);
      Index bad = 0;
      try {
        rtilde = precond(sk.a1);
        if (degenerate_diagonal(rtilde, bad)) throw SingularTriangular(bad);
      } catch (const SingularTriangular&) {
        if (last_attempt) throw;
        continue;
      }
    }
    fact.report.stages.push_back({Stage::Sketch, {}, {}, attempt});

    try {
      Engine eng(a, p, clock);
      eng.trisolve(rtilde);  // X = A R~^{-1}
      StageInfo pre{Stage::Precondition, {}, {}, 0};
      if (diagnostics) {
        try {
          pre.cond_x = cond_estimate(eng.current());
        } catch (const Error&) {
          pre.cond_x = std::numeric_limits<double>::quiet_NaN();
        }
      }
      fact.report.stages.push_back(pre);

      const Matrix rhat = cholesky_pass(eng, clock, fact.report);
      fact.q = eng.take();
      if (!r_less) {
        ScopedStage t(clock, Stage::Recover);
        fact.r = triangular_product(rhat, rtilde);
        normalize_sign(fact);
        fact.report.stages.push_back({Stage::Recover, {}, {}, 0});
      }
      return finish(std::move(fact), clock);
    } catch (const CholeskyBreakdown&) {
      if (last_attempt) throw;
    } catch (const SingularTriangular&) {
      if (last_attempt) throw;
    }
  }
}

}  // namespace

RunOutput run_precond(const ConstMatrixRef& a, const Preconditioner& precond,
                      const sketch::SketchConfig& cfg, int p, bool diagnostics, bool r_less) {
  detail::require_finite(a, "A");
  detail::require(a.rows() >= a.cols() && a.cols() >= 1, "need m >= n >= 1");
  detail::require(p >= 1 && p <= a.rows(), "worker count must be in [1, m]");
  return run_precond_impl(a, precond, cfg, p, diagnostics, r_less);
}

RunOutput run_method(Method method, const ConstMatrixRef& a, int p, const MethodConfig& cfg) {
  detail::require_finite(a, "A");
  detail::require(a.rows() >= a.cols() && a.cols() >= 1, "need m >= n >= 1");
  detail::require(p >= 1 && p <= a.rows(), "worker count must be in [1, m]");

  switch (method) {
    case Method::HouseholderQr: {
      StageClock clock;
      QRFactorization fact;
      {
        ScopedStage t(clock, Stage::Householder);
        kernels::ThinQr qr = kernels::householder_qr_thin(a);
        fact.q = std::move(qr.q);
        if (!cfg.r_less) fact.r = std::move(qr.r);
      }
      fact.report.r_less = cfg.r_less;
      fact.report.stages.push_back({Stage::Householder, {}, {}, 0});
      return finish(std::move(fact), clock);
    }

    case Method::CholeskyQr: {
      StageClock clock;
      Engine eng(a, p, clock);
      QRFactorization fact;
      fact.report.r_less = cfg.r_less;
      Matrix r1 = cholesky_pass(eng, clock, fact.report);
      fact.q = eng.take();
      if (!cfg.r_less) fact.r = std::move(r1);
      return finish(std::move(fact), clock);
    }

    case Method::CholeskyQr2: {
      StageClock clock;
      Engine eng(a, p, clock);
      QRFactorization fact;
      fact.report.r_less = cfg.r_less;
      const Matrix r1 = cholesky_pass(eng, clock, fact.report);
      const Matrix r2 = cholesky_pass(eng, clock, fact.report);
      fact.q = eng.take();
      if (!cfg.r_less) {
        ScopedStage t(clock, Stage::Recover);
        fact.r = triangular_product(r2, r1);
        fact.report.stages.push_back({Stage::Recover, {}, {}, 0});
      }
      return finish(std::move(fact), clock);
    }

    case Method::ShiftedCholeskyQr3: {
      StageClock clock;
      const double shift = cfg.shift.resolve(a.rows(), a.cols(), a.squaredNorm());
      Engine eng(a, p, clock);
      QRFactorization fact;
      fact.report.r_less = cfg.r_less;
      const Matrix r1 = cholesky_pass(eng, clock, fact.report, shift);
      const Matrix r2 = cholesky_pass(eng, clock, fact.report);
      const Matrix r3 = cholesky_pass(eng, clock, fact.report);
      fact.q = eng.take();
      if (!cfg.r_less) {
        ScopedStage t(clock, Stage::Recover);
        fact.r = triangular_product(r3, triangular_product(r2, r1));
        fact.report.stages.push_back({Stage::Recover, {}, {}, 0});
      }
      return finish(std::move(fact), clock);
    }

    case Method::RqrCholeskyQr:
      return run_precond_impl(
          a, [](const ConstMatrixRef& a1) { return kernels::qr_r_factor(a1); }, cfg.sketch, p,
          cfg.diagnostics, cfg.r_less);

    case Method::RluCholeskyQr:
      return run_precond_impl(
          a, [](const ConstMatrixRef& a1) { return kernels::lu_u_factor(a1); }, cfg.sketch, p,
          cfg.diagnostics, cfg.r_less);

    case Method::RqrCholeskyQrGaussian: {
      MethodConfig gauss = cfg;
      gauss.sketch.strategy = sketch::Strategy::Gaussian;
      return run_precond_impl(
          a, [](const ConstMatrixRef& a1) { return kernels::qr_r_factor(a1); }, gauss.sketch, p,
          cfg.diagnostics, cfg.r_less);
    }
  }
  throw std::invalid_argument("unknown method");
}

}  // namespace cholqr::detail
