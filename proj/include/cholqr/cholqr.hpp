#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "cholqr/sketch.hpp"
#include "cholqr/types.hpp"

namespace cholqr {

enum class Stage {
  Sketch,
  Precondition,
  Gram,
  Cholesky,
  Trisolve,
  Recover,
  Householder,
};
inline constexpr int kStageCount = 7;

const char* stage_name(Stage s);

struct StageInfo {
  Stage stage;
  /// Condition estimate of the intermediate X entering the CholeskyQR step
  /// (recorded on the Precondition stage when diagnostics are enabled).
  std::optional<double> cond_x;
  /// Diagonal shift applied before this Cholesky stage.
  std::optional<double> shift;
  /// Sketch redraws consumed before this stage succeeded.
  int retries = 0;
};

struct StageReport {
  std::vector<StageInfo> stages;
  bool r_less = false;
};

struct QRFactorization {
  Matrix q;  // m x n
  Matrix r;  // n x n upper triangular with positive diagonal; empty in r_less mode
  StageReport report;
};

/// Shift for the first Cholesky stage of shifted CholeskyQR3.
struct ShiftMode {
  enum class Kind { TheoryFormula, Fixed };
  Kind kind = Kind::TheoryFormula;
  double value = 0.0;

  /// eps = 11 (mn + n(n+1)) u ||A||_F^2; the Frobenius norm is a cheap upper
  /// bound for the spectral norm the formula asks for.
  static ShiftMode theory() { return {Kind::TheoryFormula, 0.0}; }
  static ShiftMode fixed(double eps) { return {Kind::Fixed, eps}; }

  double resolve(Index m, Index n, double a_squared_frobenius_norm) const;
};

struct Options {
  /// Record cond(X) of preconditioned intermediates in the StageReport.
  /// Costs an extra O(m n^2) R-factorization, so it is off by default.
  bool diagnostics = false;
  /// Skip reconstructing R when only Q is wanted.
  bool r_less = false;
  /// Row-block workers used for Grammians and triangular solves. Results are
  /// bitwise identical for any worker count.
  int workers = 1;
};

/// Everything a family member might need; used by the generic runners.
struct MethodConfig {
  sketch::SketchConfig sketch{};
  ShiftMode shift = ShiftMode::theory();
  bool diagnostics = false;
  bool r_less = false;
};

/// Plain CholeskyQR: R = chol(A^T A), Q = A R^{-1}. Orthogonality degrades as
/// cond(A)^2 u and the Cholesky step breaks down once cond(A)^2 exceeds 1/u.
QRFactorization cholesky_qr(const ConstMatrixRef& a, const Options& opts = {});

/// Two chained CholeskyQR passes; R = R2 R1.
QRFactorization cholesky_qr2(const ConstMatrixRef& a, const Options& opts = {});

/// Cholesky of A^T A + eps I followed by two CholeskyQR refinements;
/// R = R3 R2 R1.
QRFactorization shifted_cholesky_qr3(const ConstMatrixRef& a, ShiftMode shift,
                                     const Options& opts = {});
QRFactorization shifted_cholesky_qr3(const ConstMatrixRef& a, const Options& opts = {});

/// Maps the sketch A1 to an invertible upper-triangular preconditioner.
using Preconditioner = std::function<Matrix(const ConstMatrixRef& a1)>;

/// Abstract preconditioned framework: draw a sketch, factor it into an
/// upper-triangular R~, solve X = A R~^{-1}, run CholeskyQR on X and recover
/// R = R^ R~. Degenerate draws (a zero diagonal in R~) are re-sketched with
/// cfg.retry_growth times more rows, at most cfg.max_retries times.
QRFactorization precond_cholesky_qr(const ConstMatrixRef& a, const Preconditioner& precond,
                                    const sketch::SketchConfig& cfg, const Options& opts = {});

/// Framework instance with a Q-less Householder QR preconditioner.
QRFactorization rqr_cholesky_qr(const ConstMatrixRef& a, const sketch::SketchConfig& cfg,
                                const Options& opts = {});

/// Framework instance with a row-partially-pivoted LU preconditioner.
QRFactorization rlu_cholesky_qr(const ConstMatrixRef& a, const sketch::SketchConfig& cfg,
                                const Options& opts = {});

}  // namespace cholqr
