// Acceptance suite: every criterion below runs at its stated size and
// tolerance and prints one PASS/FAIL line. Run all with no arguments or a
// single criterion with --only <id>. Exit code is the number of failures.

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bench/experiments.hpp"
#include "cholqr/apps.hpp"
#include "cholqr/cholqr.hpp"
#include "cholqr/diagnostics.hpp"
#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "cholqr/matgen.hpp"
#include "cholqr/parexec.hpp"
#include "cholqr/rng.hpp"
#include "cholqr/sketch.hpp"

using namespace cholqr;
namespace diag = cholqr::diagnostics;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << "  FAILED: " << what << "\n";
    }
  }
  void note(const std::string& what) { detail << "  " << what << "\n"; }
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> kappa_grid() {
  std::vector<double> g;
  for (double k = 1e3; k <= 1.0000001e15; k *= 10.0) g.push_back(k);
  return g;
}

// --- 1. stability of the randomized methods and sCholeskyQR3 across kappa ---
Outcome criterion1() {
  Check c;
  bench::AccuracyArgs args;
  args.m = 100000;
  args.n = 100;
  args.rate = 2.0;
  args.kappas = kappa_grid();
  args.methods = {Method::RqrCholeskyQr, Method::RluCholeskyQr, Method::ShiftedCholeskyQr3};
  args.seeds = 3;
  args.seed0 = 1;
  args.shift = ShiftMode::fixed(1e-15);

  double worst_orth = 0.0, worst_res = 0.0;
  for (const auto& r : bench::run_accuracy(args)) {
    std::ostringstream tag;
    tag << method_name(r.method) << " kappa=" << r.kappa << " seed=" << r.seed;
    c.require(r.status == "ok", tag.str() + " status=" + r.status);
    if (r.status != "ok") continue;
    c.require(*r.orth_err <= 1e-11, tag.str() + " orth_err=" + fmt(*r.orth_err) + " > 1e-11");
    c.require(*r.res_err <= 1e-12, tag.str() + " res_err=" + fmt(*r.res_err) + " > 1e-12");
    worst_orth = std::max(worst_orth, *r.orth_err);
    worst_res = std::max(worst_res, *r.res_err);
  }
  c.note("worst orth_err=" + fmt(worst_orth) + ", worst res_err=" + fmt(worst_res) +
         " over 13 kappas x 3 seeds x 3 methods");
  return {c.ok, c.detail.str()};
}

// --- 2. breakdown regime of CholeskyQR and CholeskyQR2 ---
Outcome criterion2() {
  Check c;
  bench::AccuracyArgs args;
  args.m = 100000;
  args.n = 100;
  args.kappas = kappa_grid();
  args.methods = {Method::CholeskyQr, Method::CholeskyQr2};
  args.seeds = 3;
  args.seed0 = 1;

  for (const auto& r : bench::run_accuracy(args)) {
    std::ostringstream tag;
    tag << method_name(r.method) << " kappa=" << r.kappa << " seed=" << r.seed;
    if (r.kappa >= 1e10)
      c.require(r.status == "breakdown", tag.str() + " expected breakdown, got " + r.status);
    if (r.kappa <= 1e6)
      c.require(r.status == "ok", tag.str() + " expected ok, got " + r.status);
    if (r.method == Method::CholeskyQr && r.kappa == 1e4 && r.status == "ok") {
      c.require(*r.orth_err >= 1e-10 && *r.orth_err <= 1e-6,
                tag.str() + " orth_err=" + fmt(*r.orth_err) + " outside [1e-10, 1e-6]");
      c.note("cholqr orth_err at kappa=1e4, seed=" + std::to_string(r.seed) + ": " +
             fmt(*r.orth_err));
    }
  }
  return {c.ok, c.detail.str()};
}

// --- 3. cond(X) = cond(P Q) identity on extraction sketches ---
Outcome criterion3() {
  Check c;
  const Index m = 2000, n = 40, l = 80;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Matrix a = matgen::synthesize({m, n, 1e4, seed});
    const Matrix q_oracle = kernels::householder_qr_thin(a).q;
    sketch::SketchConfig cfg;
    cfg.size = l;
    rng::Stream stream(1000 + seed);
    const sketch::Sketch sk = sketch::sample_rows_uniform(a, cfg, stream);
    const Matrix rt = kernels::qr_r_factor(sk.a1);
    const Matrix x = kernels::right_trisolve(a, rt);
    const double cond_x = diag::cond2(x);
    Matrix pq(l, n);
    for (Index k = 0; k < l; ++k) pq.row(k) = q_oracle.row(sk.indices[static_cast<std::size_t>(k)]);
    const double rel = std::abs(cond_x - diag::cond2(pq)) / cond_x;
    worst = std::max(worst, rel);
    c.require(rel <= 1e-6, "seed " + std::to_string(seed) + ": relative gap " + fmt(rel));
  }
  c.note("worst relative gap " + fmt(worst) + " over 50 instances (m=2000, n=40, l=80)");
  return {c.ok, c.detail.str()};
}

// --- 4. cond(X) distribution against the sampling rate ---
Outcome criterion4() {
  Check c;
  bench::SamplingArgs args;
  args.m = 10000;
  args.n = 100;
  args.kappa = 1e5;
  args.rates = {1.1, 1.2, 1.5, 2.0, 3.0};
  args.seeds = 200;
  const auto records = bench::run_sampling(args);

  std::vector<double> med;
  for (double rate : args.rates) {
    std::vector<double> conds;
    for (const auto& r : records)
      if (r.rate == rate && r.cond_x) conds.push_back(*r.cond_x);
    c.require(conds.size() == 200, "missing cond values at rate " + fmt(rate));
    med.push_back(median(conds));
    c.note("rate " + fmt(rate) + ": median cond(X) = " + fmt(med.back()));
  }
  c.require(med[1] <= 100.0, "median at rate 1.2 is " + fmt(med[1]) + " > 100");
  c.require(med[3] <= 20.0, "median at rate 2.0 is " + fmt(med[3]) + " > 20");

  int inversions = 0;
  for (std::size_t i = 0; i + 1 < med.size(); ++i) {
    if (med[i + 1] > med[i]) {
      ++inversions;
      c.require(med[i + 1] <= 1.10 * med[i],
                "inversion beyond 10% between rates " + fmt(args.rates[i]) + " and " +
                    fmt(args.rates[i + 1]));
    }
  }
  c.require(inversions <= 1, "more than one median inversion");
  return {c.ok, c.detail.str()};
}

// --- 5. Gaussian-ensemble tail ---
Outcome criterion5() {
  Check c;
  const Index m = 2000, n = 50, l = 200;
  const auto bound = diag::gaussian_tail(n, l);
  c.require(bound.cond_threshold == 7.0, "threshold is not 7");
  const int trials = 200;
  int exceed = 0;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix a = matgen::synthesize({m, n, 1e8, 4000 + static_cast<std::uint64_t>(t)});
    sketch::SketchConfig cfg;
    cfg.size = l;
    cfg.strategy = sketch::Strategy::Gaussian;
    rng::Stream stream(5000 + static_cast<std::uint64_t>(t));
    const sketch::Sketch sk = sketch::sketch_gaussian(a, cfg, stream);
    const Matrix rt = kernels::qr_r_factor(sk.a1);
    const Matrix x = kernels::right_trisolve(a, rt);
    const double cond = diag::cond2(x);
    worst = std::max(worst, cond);
    if (cond >= bound.cond_threshold) ++exceed;
  }
  const double freq = static_cast<double>(exceed) / trials;
  const double sigma = std::sqrt(bound.tail_probability * (1.0 - bound.tail_probability) /
                                 static_cast<double>(trials));
  const double limit = bound.tail_probability + 3.0 * sigma;
  c.note("observed exceedance " + fmt(freq) + " (worst cond(X) " + fmt(worst) + "), limit " +
         fmt(limit));
  c.require(freq <= limit, "exceedance " + fmt(freq) + " > " + fmt(limit));
  return {c.ok, c.detail.str()};
}

// --- 6. matrix-Chernoff coverage over the criterion-4 grid ---
Outcome criterion6() {
  Check c;
  const Index m = 10000, n = 100;
  const std::vector<double> rates = {1.1, 1.2, 1.5, 2.0, 3.0};
  const int seeds = 200;
  const double eps = 0.5, delta = 0.5;

  // cond(X) equals cond(P Q) for extraction sketches (the identity checked by
  // criterion 3), so the theorem's own quantity is evaluated directly on the
  // sampled rows of the oracle orthogonal factor.
  std::vector<int> exceed(rates.size(), 0);
  std::vector<double> worst_tail(rates.size(), 0.0);
  for (int s = 0; s < seeds; ++s) {
    const Matrix a = matgen::synthesize({m, n, 1e5, 6000 + static_cast<std::uint64_t>(s)});
    const Matrix q = kernels::householder_qr_thin(a).q;
    const double theta_q = diag::theta(q);
    for (std::size_t ri = 0; ri < rates.size(); ++ri) {
      const Index l = static_cast<Index>(std::llround(rates[ri] * static_cast<double>(n)));
      const auto b = diag::chernoff_tail_uniform(n, l, m, theta_q, eps, delta);
      worst_tail[ri] = std::max(worst_tail[ri], b.tail_probability);
      sketch::SketchConfig cfg;
      cfg.size = l;
      rng::Stream stream(rng::derive(7000 + static_cast<std::uint64_t>(s), ri));
      const sketch::Sketch sk = sketch::sample_rows_uniform(a, cfg, stream);
      Matrix pq(l, n);
      for (Index k = 0; k < l; ++k)
        pq.row(k) = q.row(sk.indices[static_cast<std::size_t>(k)]);
      if (diag::cond2(pq) >= b.cond_threshold) ++exceed[ri];
    }
  }
  for (std::size_t ri = 0; ri < rates.size(); ++ri) {
    const double freq = static_cast<double>(exceed[ri]) / seeds;
    const double capped = std::min(1.0, worst_tail[ri]);
    const double sigma = std::sqrt(capped * (1.0 - capped) / static_cast<double>(seeds));
    const double limit = worst_tail[ri] + 3.0 * sigma;
    c.note("rate " + fmt(rates[ri]) + ": freq " + fmt(freq) + ", bound " + fmt(worst_tail[ri]) +
           (worst_tail[ri] >= 1.0 ? " (vacuous)" : ""));
    c.require(freq <= limit,
              "rate " + fmt(rates[ri]) + ": " + fmt(freq) + " > " + fmt(limit));
  }
  return {c.ok, c.detail.str()};
}

// --- 7. flop model reproduces the cost table ---
Outcome criterion7() {
  Check c;
  const Index m = 100000, n = 100, l = 200;
  const double n2 = static_cast<double>(n) * n;
  auto total = [&](Method mm, Index mi, Index ni, Index li) {
    return diag::flop_estimate(mm, mi, ni, li, 1).total;
  };
  c.require(total(Method::CholeskyQr, m, n, l) == n2 * (2.0 * m + n / 3.0), "CholeskyQR row");
  c.require(total(Method::CholeskyQr2, m, n, l) == n2 * (4.0 * m + 2.0 / 3.0 * n),
            "CholeskyQR2 row");
  c.require(total(Method::ShiftedCholeskyQr3, m, n, l) == n2 * (6.0 * m + 1.0 * n),
            "sCholeskyQR3 row");
  c.require(total(Method::RluCholeskyQr, m, n, l) == n2 * (3.0 * m + 1.0 * l), "rLU row");
  c.require(total(Method::RqrCholeskyQr, m, n, l) == n2 * (3.0 * m + 4.0 * l - n), "rQR row");
  c.require(diag::flop_estimate(Method::CholeskyQr, m, n, l, 4).critical_path ==
                n2 * (2.0 * m / 4.0 + n / 3.0),
            "critical path with p=4");

  for (Index ni : {2, 5, 10, 64, 100, 333, 1000}) {
    for (Index mult = 8; mult <= 64; mult *= 2) {
      const Index mi = mult * ni;
      c.require(total(Method::RqrCholeskyQr, mi, ni, 2 * ni) <
                    total(Method::CholeskyQr2, mi, ni, 2 * ni),
                "rQR >= CholeskyQR2 at m=" + std::to_string(mi) + ", n=" + std::to_string(ni));
    }
  }
  c.note("five family rows pinned; rQR < CholeskyQR2 whenever m > 7n at l = 2n");
  return {c.ok, c.detail.str()};
}

// --- 8. parallel consistency and the communication table ---
Outcome criterion8() {
  Check c;
  const Index m = 200000, n = 50;
  const Matrix a = matgen::synthesize({m, n, 1e5, 1});

  for (Method method : {Method::CholeskyQr, Method::CholeskyQr2, Method::ShiftedCholeskyQr3,
                        Method::RluCholeskyQr, Method::RqrCholeskyQr}) {
    MethodConfig cfg;
    cfg.sketch.seed = 2;
    cfg.shift = ShiftMode::fixed(1e-15);
    Matrix q1;
    for (int p : {1, 2, 4, 8}) {
      const auto run = parexec::run_parallel(method, a, p, cfg);
      if (p == 1) {
        q1 = run.factorization.q;
        continue;
      }
      const double gap = (run.factorization.q - q1).norm();
      c.require(gap <= 1e-10, std::string(method_name(method)) + " p=" + std::to_string(p) +
                                  ": ||Q_p - Q_1|| = " + fmt(gap));
    }
    const Index l = cfg.sketch.resolved_size(m, n);
    for (int p : {2, 4, 8}) {
      const auto model = parexec::comm_model(method, p, n, l);
      const double pn2 = static_cast<double>(p) * n * n;
      double expect_min = 0, expect_max = 0;
      switch (method) {
        case Method::CholeskyQr: expect_min = expect_max = pn2; break;
        case Method::CholeskyQr2: expect_min = expect_max = 2 * pn2; break;
        case Method::ShiftedCholeskyQr3: expect_min = expect_max = 3 * pn2; break;
        default:
          expect_min = 1.5 * pn2;
          expect_max = 1.5 * pn2 + static_cast<double>(n) * l;
      }
      c.require(model.volume_min == expect_min && model.volume_max == expect_max,
                std::string(method_name(method)) + ": communication volume mismatch");
    }
  }

  // triangular solves are bitwise independent of the partition
  const Matrix r = kernels::qr_r_factor(
      Matrix(rng::gaussian_matrix(200, n, 3)));
  const Matrix x1 =
      parexec::concatenate(parexec::parallel_trisolve(parexec::partition_rows(a, 1), r));
  for (int p : {2, 4, 8}) {
    const Matrix xp =
        parexec::concatenate(parexec::parallel_trisolve(parexec::partition_rows(a, p), r));
    c.require((xp - x1).cwiseAbs().maxCoeff() == 0.0,
              "parallel_trisolve differs at p=" + std::to_string(p));
  }
  c.note("five methods bitwise p-consistent on m=2e5, n=50, kappa=1e5");
  return {c.ok, c.detail.str()};
}

// --- 9. relative runtime ordering at p = 8 ---
Outcome criterion9() {
  Check c;
  const Index m = 1000000, n = 100;
  const Matrix a = matgen::synthesize({m, n, 1e5, 1});
  std::vector<double> t_rqr, t_c2, t_s3;
  for (int round = 0; round < 5; ++round) {
    MethodConfig cfg;
    cfg.sketch.seed = 10 + static_cast<std::uint64_t>(round);
    cfg.shift = ShiftMode::fixed(1e-15);
    t_rqr.push_back(parexec::run_parallel(Method::RqrCholeskyQr, a, 8, cfg).timing.total_ms);
    t_c2.push_back(parexec::run_parallel(Method::CholeskyQr2, a, 8, cfg).timing.total_ms);
    t_s3.push_back(parexec::run_parallel(Method::ShiftedCholeskyQr3, a, 8, cfg).timing.total_ms);
  }
  const double rqr = median(t_rqr), c2 = median(t_c2), s3 = median(t_s3);
  c.note("median wall ms over 5 runs: rQR " + fmt(rqr) + ", CholeskyQR2 " + fmt(c2) +
         ", sCholeskyQR3 " + fmt(s3));
  c.note("CholeskyQR2 / rQR ratio " + fmt(c2 / rqr) + " (reference trend: 1.24)");
  c.require(rqr <= c2, "t(rQR) > t(CholeskyQR2)");
  c.require(c2 <= s3, "t(CholeskyQR2) > t(sCholeskyQR3)");
  return {c.ok, c.detail.str()};
}

// --- 10. RSVD application ---
Outcome criterion10() {
  Check c;
  bench::RsvdArgs args;
  args.rows = 50000;
  args.cols = 5000;
  args.density = 1e-4;
  args.k = 20;
  args.power = 3;
  args.orths = {apps::Orth::HouseholderQr, apps::Orth::RqrCholeskyQr};
  args.seed = 1;
  const auto out = bench::run_rsvd(args);
  c.require(out.sigma_max_rel_diff <= 1e-6,
            "sigma disagreement " + fmt(out.sigma_max_rel_diff) + " > 1e-6");
  auto total = [](const apps::RsvdResult& r) {
    double t = 0.0;
    for (double v : r.per_iteration_orth_time) t += v;
    return t;
  };
  const double ratio = total(out.results[0]) / total(out.results[1]);
  c.note("sigma max relative difference " + fmt(out.sigma_max_rel_diff));
  c.note("total orthogonalization time ratio QR/rQR = " + fmt(ratio) + " (reported)");
  return {c.ok, c.detail.str()};
}

// --- 11. round-off inflation bound on cond(X) ---
Outcome criterion11() {
  Check c;
  const Index m = 10000, n = 50, l = 100;
  const double alpha = static_cast<double>(l) * n * kUnitRoundoff;        // Householder QR
  const double beta = static_cast<double>(m) * std::sqrt(double(n)) * kUnitRoundoff;
  int held = 0, violated_hypotheses = 0, applicable = 0;
  for (int s = 0; s < 100; ++s) {
    const Matrix a = matgen::synthesize({m, n, 1e6, 8000 + static_cast<std::uint64_t>(s)});
    const Matrix q_oracle = kernels::householder_qr_thin(a).q;
    sketch::SketchConfig cfg;
    cfg.size = l;
    rng::Stream stream(9000 + static_cast<std::uint64_t>(s));
    const sketch::Sketch sk = sketch::sample_rows_uniform(a, cfg, stream);
    const Matrix rt = kernels::qr_r_factor(sk.a1);
    const Matrix x_hat = kernels::right_trisolve(a, rt);
    Matrix pq(l, n);
    for (Index k = 0; k < l; ++k)
      pq.row(k) = q_oracle.row(sk.indices[static_cast<std::size_t>(k)]);
    try {
      const double cond_x = diag::cond2(pq);  // exact-arithmetic surrogate
      const auto bound =
          diag::stability_gamma(alpha, beta, diag::cond2(a), diag::cond2(sk.a1), cond_x);
      ++applicable;
      if (diag::cond2(x_hat) <= bound.cond_inflation) ++held;
    } catch (const HypothesisViolated&) {
      ++violated_hypotheses;
    }
  }
  c.note(std::to_string(held) + "/" + std::to_string(applicable) +
         " bounds held; hypotheses inapplicable in " + std::to_string(violated_hypotheses) +
         " cases (flagged, not failures)");
  c.require(held + violated_hypotheses >= 99,
            "bound held in only " + std::to_string(held) + " of " + std::to_string(applicable));
  return {c.ok, c.detail.str()};
}

// --- 12. preconditioned least squares ---
Outcome criterion12() {
  Check c;
  const Index m = 10000, n = 50;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Matrix a = matgen::synthesize({m, n, 1e6, seed});
    const Vector x_star = rng::gaussian_matrix(n, 1, 100 + seed);
    const Vector b = a * x_star;
    sketch::SketchConfig cfg;
    cfg.seed = 200 + seed;
    const Vector x = apps::ls_solve(a, b, cfg);
    const double err = (x - x_star).norm() / x_star.norm();
    const Vector x_raw = apps::ls_solve_normal(a, b);
    const double err_raw = (x_raw - x_star).norm() / x_star.norm();
    c.note("seed " + std::to_string(seed) + ": preconditioned " + fmt(err) +
           ", normal equations " + fmt(err_raw));
    c.require(err <= 1e-8, "seed " + std::to_string(seed) + ": error " + fmt(err) + " > 1e-8");
    c.require(err_raw > 1e-6,
              "seed " + std::to_string(seed) + ": normal equations unexpectedly accurate");
  }
  return {c.ok, c.detail.str()};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "randomized methods and sCholeskyQR3 stable for kappa in 1e3..1e15", criterion1},
    {2, "CholeskyQR/CholeskyQR2 break down past kappa = 1e10, ok through 1e6", criterion2},
    {3, "cond(X) = cond(P Q) identity within 1e-6", criterion3},
    {4, "median cond(X) against sampling rate (1.2 -> <=100, 2.0 -> <=20)", criterion4},
    {5, "Gaussian-ensemble tail: P[cond(X) >= 7] within bound", criterion5},
    {6, "matrix-Chernoff exceedance never beats the evaluated bound", criterion6},
    {7, "flop model matches the cost table symbolically", criterion7},
    {8, "parallel consistency and communication volumes", criterion8},
    {9, "runtime ordering rQR <= CholeskyQR2 <= sCholeskyQR3 at p=8", criterion9},
    {10, "RSVD: orthogonalizer choice leaves sigma unchanged; QR/rQR ratio", criterion10},
    {11, "cond inflation bound holds empirically (c = 1)", criterion11},
    {12, "preconditioned LS reaches 1e-8 where normal equations cannot", criterion12},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (const Criterion& crit : kCriteria) {
    if (only != 0 && crit.id != only) continue;
    Outcome out;
    try {
      out = crit.run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("  unexpected exception: ") + e.what() + "\n";
    }
    std::cout << "[" << (crit.id < 10 ? " " : "") << crit.id << "] "
              << (out.pass ? "PASS" : "FAIL") << "  " << crit.title << "\n"
              << out.detail << std::flush;
    if (!out.pass) ++failures;
  }
  return failures;
}
