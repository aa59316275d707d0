#pragma once

// Internal execution engine shared by the sequential algorithm API and
// parexec::run_parallel: one implementation of every family member, with the
// worker count as a parameter.

#include <chrono>

#include "cholqr/cholqr.hpp"
#include "cholqr/parexec.hpp"

namespace cholqr::detail {

class StageClock {
 public:
  void add(Stage s, double ms) { ms_[static_cast<std::size_t>(s)] += ms; }
  const std::array<double, kStageCount>& stage_ms() const { return ms_; }
  double total_ms() const {
    double t = 0.0;
    for (double v : ms_) t += v;
    return t;
  }

 private:
  std::array<double, kStageCount> ms_{};
};

class ScopedStage {
 public:
  ScopedStage(StageClock& clock, Stage s)
      : clock_(clock), stage_(s), start_(std::chrono::steady_clock::now()) {}
  ~ScopedStage() {
    const auto end = std::chrono::steady_clock::now();
    clock_.add(stage_, std::chrono::duration<double, std::milli>(end - start_).count());
  }

 private:
  StageClock& clock_;
  Stage stage_;
  std::chrono::steady_clock::time_point start_;
};

struct RunOutput {
  QRFactorization fact;
  std::array<double, kStageCount> stage_ms{};
  double total_ms = 0.0;
};

RunOutput run_method(Method method, const ConstMatrixRef& a, int p, const MethodConfig& cfg);

RunOutput run_precond(const ConstMatrixRef& a, const Preconditioner& precond,
                      const sketch::SketchConfig& cfg, int p, bool diagnostics, bool r_less);

/// Grammian of a view evaluated by `workers` threads over the fixed global
/// chunk tree; bitwise equal to kernels::gram for any worker count.
Matrix gram_of_view(const ConstMatrixRef& a, int workers);

/// Run fn(w) for w in [0, workers) on `workers` OS threads (w = 0 runs on the
/// calling thread).
void run_on_workers(int workers, const std::function<void(int)>& fn);

}  // namespace cholqr::detail
