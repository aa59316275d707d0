#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cholqr/apps.hpp"
#include "cholqr/cholqr.hpp"
#include "cholqr/parexec.hpp"
#include "cholqr/types.hpp"

namespace cholqr::bench {

/// One benchmark measurement. Breakdowns are data, not crashes.
struct RunRecord {
  Method method = Method::CholeskyQr;
  Index m = 0, n = 0, l = 0;
  int p = 1;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  std::string status;  // ok | breakdown | singular
  std::optional<double> orth_err;
  std::optional<double> res_err;
  std::optional<double> cond_x;
  std::array<double, kStageCount> stage_ms{};
  double total_ms = 0.0;
  int comm_rounds = 0;
  double comm_volume = 0.0;
};

/// Factor `a` with one method and measure errors/timings; Cholesky breakdowns
/// and singular preconditioners land in `status`.
RunRecord measure(Method method, const ConstMatrixRef& a, double kappa, std::uint64_t seed,
                  int p, const MethodConfig& cfg);

std::vector<std::string> run_record_header();
std::vector<std::string> run_record_fields(const RunRecord& r);
void write_run_records(const std::string& path, const std::vector<RunRecord>& records);

// ---- accuracy: method x kappa grid x seed at fixed shape ----

struct AccuracyArgs {
  Index m = 100000;
  Index n = 100;
  Index l = 0;        // 0: use rate
  double rate = 2.0;  // l = 2n by default
  std::vector<double> kappas;
  std::vector<Method> methods;
  int seeds = 3;
  std::uint64_t seed0 = 1;
  ShiftMode shift = ShiftMode::fixed(1e-15);
  bool diagnostics = false;
  int p = 1;
};

std::vector<RunRecord> run_accuracy(const AccuracyArgs& args);

// ---- runtime: m grid at fixed n, kappa, p ----

struct RuntimeArgs {
  std::vector<Index> ms;
  Index n = 100;
  double kappa = 1e5;
  int p = 1;
  Index l = 0;
  double rate = 2.0;
  std::vector<Method> methods;
  int seeds = 1;
  std::uint64_t seed0 = 1;
  ShiftMode shift = ShiftMode::fixed(1e-15);
  bool diagnostics = false;
};

std::vector<RunRecord> run_runtime(const RuntimeArgs& args);

// ---- scaling: p grid, strong (fixed m) or weak (fixed m/p) ----

struct ScalingArgs {
  bool weak = false;
  Index m = 200000;  // strong: total rows; weak: rows per process
  Index n = 50;
  double kappa = 1e5;
  std::vector<int> ps = {1, 2, 4, 8};
  std::vector<Method> methods;
  int seeds = 1;
  std::uint64_t seed0 = 1;
  ShiftMode shift = ShiftMode::fixed(1e-15);
  bool diagnostics = false;
};

struct ScalingRecord {
  RunRecord rec;
  double speedup = 1.0;  // t(p=1)/t(p) of the same method and seed
};

std::vector<ScalingRecord> run_scaling(const ScalingArgs& args);
void write_scaling_records(const std::string& path, const std::vector<ScalingRecord>& records);

// ---- sampling: cond(X) distribution against the sampling rate l/n ----

struct SamplingArgs {
  Index m = 10000;
  Index n = 100;
  double kappa = 1e5;
  std::vector<double> rates;  // default 1.0:3.0:0.1
  int seeds = 200;
  std::uint64_t seed0 = 1;
};

struct SamplingRecord {
  Index m = 0, n = 0, l = 0;
  double rate = 0.0;
  double kappa = 1.0;
  std::uint64_t seed = 0;
  std::string status;  // ok | singular
  std::optional<double> cond_x;
};

std::vector<SamplingRecord> run_sampling(const SamplingArgs& args);
void write_sampling_records(const std::string& path, const std::vector<SamplingRecord>& records);

// ---- rsvd: per-iteration orthogonalization cost across orthogonalizers ----

struct RsvdArgs {
  std::string mm_path;  // empty: synthetic sparse input
  Index rows = 50000;
  Index cols = 5000;
  double density = 1e-4;
  Index k = 20;
  int power = 3;
  std::vector<apps::Orth> orths = {apps::Orth::HouseholderQr, apps::Orth::RqrCholeskyQr};
  std::uint64_t seed = 1;
  int workers = 1;
};

struct RsvdOutcome {
  std::vector<apps::RsvdResult> results;  // parallel to args.orths
  /// max over orth pairs of the relative sigma difference
  double sigma_max_rel_diff = 0.0;
};

RsvdOutcome run_rsvd(const RsvdArgs& args);
void write_rsvd_records(const std::string& path, const RsvdArgs& args, const RsvdOutcome& out);

}  // namespace cholqr::bench
