#include "cholqr/cholqr.hpp"

#include "cholqr/errors.hpp"
#include "engine.hpp"

namespace cholqr {

const char* stage_name(Stage s) {
  switch (s) {
    case Stage::Sketch: return "sketch";
    case Stage::Precondition: return "precondition";
    case Stage::Gram: return "gram";
    case Stage::Cholesky: return "cholesky";
    case Stage::Trisolve: return "trisolve";
    case Stage::Recover: return "recover";
    case Stage::Householder: return "householder";
  }
  return "?";
}

double ShiftMode::resolve(Index m, Index n, double a_squared_frobenius_norm) const {
  if (kind == Kind::Fixed) return value;
  const double mn = static_cast<double>(m) * static_cast<double>(n);
  const double nn = static_cast<double>(n) * static_cast<double>(n + 1);
  return 11.0 * (mn + nn) * kUnitRoundoff * a_squared_frobenius_norm;
}

namespace {

MethodConfig to_config(const Options& opts) {
  MethodConfig cfg;
  cfg.diagnostics = opts.diagnostics;
  cfg.r_less = opts.r_less;
  return cfg;
}

}  // namespace

QRFactorization cholesky_qr(const ConstMatrixRef& a, const Options& opts) {
  return detail::run_method(Method::CholeskyQr, a, opts.workers, to_config(opts)).fact;
}

QRFactorization cholesky_qr2(const ConstMatrixRef& a, const Options& opts) {
  return detail::run_method(Method::CholeskyQr2, a, opts.workers, to_config(opts)).fact;
}

QRFactorization shifted_cholesky_qr3(const ConstMatrixRef& a, ShiftMode shift,
                                     const Options& opts) {
  MethodConfig cfg = to_config(opts);
  cfg.shift = shift;
  return detail::run_method(Method::ShiftedCholeskyQr3, a, opts.workers, cfg).fact;
}

QRFactorization shifted_cholesky_qr3(const ConstMatrixRef& a, const Options& opts) {
  return shifted_cholesky_qr3(a, ShiftMode::theory(), opts);
}

QRFactorization precond_cholesky_qr(const ConstMatrixRef& a, const Preconditioner& precond,
                                    const sketch::SketchConfig& cfg, const Options& opts) {
  return detail::run_precond(a, precond, cfg, opts.workers, opts.diagnostics, opts.r_less).fact;
}

QRFactorization rqr_cholesky_qr(const ConstMatrixRef& a, const sketch::SketchConfig& cfg,
                                const Options& opts) {
  MethodConfig mc = to_config(opts);
  mc.sketch = cfg;
  return detail::run_method(Method::RqrCholeskyQr, a, opts.workers, mc).fact;
}

QRFactorization rlu_cholesky_qr(const ConstMatrixRef& a, const sketch::SketchConfig& cfg,
                                const Options& opts) {
  MethodConfig mc = to_config(opts);
  mc.sketch = cfg;
  return detail::run_method(Method::RluCholeskyQr, a, opts.workers, mc).fact;
}

}  // namespace cholqr
