#include "bench/experiments.hpp"

#include <cmath>

#include "bench/csv.hpp"
#include "cholqr/diagnostics.hpp"
#include "cholqr/errors.hpp"
#include "cholqr/kernels.hpp"
#include "cholqr/matgen.hpp"
#include "cholqr/rng.hpp"

namespace cholqr::bench {

RunRecord measure(Method method, const ConstMatrixRef& a, double kappa, std::uint64_t seed,
                  int p, const MethodConfig& cfg) {
  RunRecord rec;
  rec.method = method;
  rec.m = a.rows();
  rec.n = a.cols();
  rec.p = p;
  rec.kappa = kappa;
  rec.seed = seed;
  const bool sketched = method == Method::RluCholeskyQr || method == Method::RqrCholeskyQr ||
                        method == Method::RqrCholeskyQrGaussian;
  rec.l = sketched ? cfg.sketch.resolved_size(a.rows(), a.cols()) : 0;
  try {
    const parexec::ParallelRun run = parexec::run_parallel(method, a, p, cfg);
    rec.status = "ok";
    rec.orth_err = diagnostics::orthogonality_error(run.factorization.q);
    rec.res_err = diagnostics::residual_error(a, run.factorization.q, run.factorization.r);
    for (const StageInfo& s : run.factorization.report.stages)
      if (s.cond_x) rec.cond_x = s.cond_x;
    rec.stage_ms = run.timing.stage_ms;
    rec.total_ms = run.timing.total_ms;
    rec.comm_rounds = run.timing.comm_rounds;
    rec.comm_volume = run.timing.comm_volume;
  } catch (const CholeskyBreakdown&) {
    rec.status = "breakdown";
  } catch (const SingularTriangular&) {
    rec.status = "singular";
  }
  return rec;
}

std::vector<std::string> run_record_header() {
  std::vector<std::string> h = {"method", "m",      "n",        "l",       "p",
                                "kappa",  "seed",   "status",   "orth_err", "res_err",
                                "cond_x"};
  for (int s = 0; s < kStageCount; ++s)
    h.push_back("t_" + std::string(stage_name(static_cast<Stage>(s))) + "_ms");
  h.push_back("t_total_ms");
  h.push_back("comm_rounds");
  h.push_back("comm_volume");
  return h;
}

std::vector<std::string> run_record_fields(const RunRecord& r) {
  std::vector<std::string> f = {
      method_name(r.method),
      fmt(static_cast<long long>(r.m)),
      fmt(static_cast<long long>(r.n)),
      r.l > 0 ? fmt(static_cast<long long>(r.l)) : std::string(),
      fmt(static_cast<long long>(r.p)),
      fmt(r.kappa),
      fmt(r.seed),
      r.status,
      fmt_opt(r.orth_err),
      fmt_opt(r.res_err),
      fmt_opt(r.cond_x),
  };
  for (int s = 0; s < kStageCount; ++s) f.push_back(fmt(r.stage_ms[static_cast<std::size_t>(s)]));
  f.push_back(fmt(r.total_ms));
  f.push_back(fmt(static_cast<long long>(r.comm_rounds)));
  f.push_back(fmt(r.comm_volume));
  return f;
}

void write_run_records(const std::string& path, const std::vector<RunRecord>& records) {
  CsvWriter csv(path);
  csv.row(run_record_header());
  for (const RunRecord& r : records) csv.row(run_record_fields(r));
}

std::vector<RunRecord> run_accuracy(const AccuracyArgs& args) {
  std::vector<RunRecord> out;
  for (double kappa : args.kappas) {
    for (int s = 0; s < args.seeds; ++s) {
      const std::uint64_t seed = args.seed0 + static_cast<std::uint64_t>(s);
      const Matrix a = matgen::synthesize({args.m, args.n, kappa, seed});
      for (Method method : args.methods) {
        MethodConfig cfg;
        cfg.sketch.size = args.l;
        cfg.sketch.rate = args.rate;
        cfg.sketch.seed = rng::derive(seed, 0x5E7C);
        cfg.shift = args.shift;
        cfg.diagnostics = args.diagnostics;
        out.push_back(measure(method, a, kappa, seed, args.p, cfg));
      }
    }
  }
  return out;
}

std::vector<RunRecord> run_runtime(const RuntimeArgs& args) {
  std::vector<RunRecord> out;
  for (Index m : args.ms) {
    for (int s = 0; s < args.seeds; ++s) {
      const std::uint64_t seed = args.seed0 + static_cast<std::uint64_t>(s);
      const Matrix a = matgen::synthesize({m, args.n, args.kappa, seed});
      for (Method method : args.methods) {
        MethodConfig cfg;
        cfg.sketch.size = args.l;
        cfg.sketch.rate = args.rate;
        cfg.sketch.seed = rng::derive(seed, 0x5E7C);
        cfg.shift = args.shift;
        cfg.diagnostics = args.diagnostics;
        out.push_back(measure(method, a, args.kappa, seed, args.p, cfg));
      }
    }
  }
  return out;
}

std::vector<ScalingRecord> run_scaling(const ScalingArgs& args) {
  std::vector<ScalingRecord> out;
  for (int s = 0; s < args.seeds; ++s) {
    const std::uint64_t seed = args.seed0 + static_cast<std::uint64_t>(s);
    for (Method method : args.methods) {
      double t1 = 0.0;
      for (std::size_t pi = 0; pi < args.ps.size(); ++pi) {
        const int p = args.ps[pi];
        const Index m = args.weak ? args.m * static_cast<Index>(p) : args.m;
        const Matrix a = matgen::synthesize({m, args.n, args.kappa, seed});
        MethodConfig cfg;
        cfg.sketch.seed = rng::derive(seed, 0x5E7C);
        cfg.shift = args.shift;
        cfg.diagnostics = args.diagnostics;
        ScalingRecord sr;
        sr.rec = measure(method, a, args.kappa, seed, p, cfg);
        if (pi == 0) t1 = sr.rec.total_ms;
        sr.speedup = sr.rec.total_ms > 0.0 ? t1 / sr.rec.total_ms : 1.0;
        out.push_back(std::move(sr));
      }
    }
  }
  return out;
}

void write_scaling_records(const std::string& path, const std::vector<ScalingRecord>& records) {
  CsvWriter csv(path);
  std::vector<std::string> h = run_record_header();
  h.push_back("speedup");
  csv.row(h);
  for (const ScalingRecord& r : records) {
    std::vector<std::string> f = run_record_fields(r.rec);
    f.push_back(fmt(r.speedup));
    csv.row(f);
  }
}

std::vector<SamplingRecord> run_sampling(const SamplingArgs& args) {
  std::vector<SamplingRecord> out;
  for (int s = 0; s < args.seeds; ++s) {
    const std::uint64_t seed = args.seed0 + static_cast<std::uint64_t>(s);
    const Matrix a = matgen::synthesize({args.m, args.n, args.kappa, seed});
    for (double rate : args.rates) {
      SamplingRecord rec;
      rec.m = args.m;
      rec.n = args.n;
      rec.rate = rate;
      rec.kappa = args.kappa;
      rec.seed = seed;
      sketch::SketchConfig cfg;
      cfg.rate = rate;
      cfg.seed = rng::derive(seed, 0x5A3F + static_cast<std::uint64_t>(std::llround(rate * 100)));
      rec.l = cfg.resolved_size(args.m, args.n);
      rng::Stream stream(cfg.seed);
      const sketch::Sketch sk = sketch::sample_rows_uniform(a, cfg, stream);
      try {
        const Matrix rt = kernels::qr_r_factor(sk.a1);
        const Matrix x = kernels::right_trisolve(a, rt);
        rec.cond_x = diagnostics::cond2(x);
        rec.status = "ok";
      } catch (const Error&) {
        rec.status = "singular";
      }
      out.push_back(std::move(rec));
    }
  }
  return out;
}

void write_sampling_records(const std::string& path, const std::vector<SamplingRecord>& records) {
  CsvWriter csv(path);
  csv.row({"m", "n", "l", "rate", "kappa", "seed", "status", "cond_x"});
  for (const SamplingRecord& r : records)
    csv.row({fmt(static_cast<long long>(r.m)), fmt(static_cast<long long>(r.n)),
             fmt(static_cast<long long>(r.l)), fmt(r.rate), fmt(r.kappa), fmt(r.seed), r.status,
             fmt_opt(r.cond_x)});
}

RsvdOutcome run_rsvd(const RsvdArgs& args) {
  const apps::SparseMatrixCsr a = args.mm_path.empty()
                                      ? apps::random_sparse(args.rows, args.cols, args.density,
                                                            rng::derive(args.seed, 0xC5A))
                                      : apps::load_matrix_market(args.mm_path);
  RsvdOutcome out;
  for (apps::Orth orth : args.orths)
    out.results.push_back(apps::rsvd_power(a, args.k, args.power, orth, args.seed, args.workers));
  for (std::size_t i = 0; i + 1 < out.results.size(); ++i) {
    for (std::size_t j = i + 1; j < out.results.size(); ++j) {
      const Vector& si = out.results[i].sigma;
      const Vector& sj = out.results[j].sigma;
      for (Index t = 0; t < si.size(); ++t) {
        const double denom = std::max(std::abs(si(t)), std::abs(sj(t)));
        if (denom > 0.0)
          out.sigma_max_rel_diff =
              std::max(out.sigma_max_rel_diff, std::abs(si(t) - sj(t)) / denom);
      }
    }
  }
  return out;
}

void write_rsvd_records(const std::string& path, const RsvdArgs& args, const RsvdOutcome& out) {
  CsvWriter csv(path);
  csv.row({"kind", "call", "qr_ms", "rqr_ms", "cholqr2_ms", "ratio", "sigma_max_rel_diff"});
  auto find_orth = [&](apps::Orth o) -> const apps::RsvdResult* {
    for (std::size_t i = 0; i < args.orths.size(); ++i)
      if (args.orths[i] == o) return &out.results[i];
    return nullptr;
  };
  const apps::RsvdResult* qr = find_orth(apps::Orth::HouseholderQr);
  const apps::RsvdResult* rqr = find_orth(apps::Orth::RqrCholeskyQr);
  const apps::RsvdResult* c2 = find_orth(apps::Orth::CholeskyQr2);
  const std::size_t calls = out.results.empty() ? 0 : out.results[0].per_iteration_orth_time.size();
  auto at = [&](const apps::RsvdResult* r, std::size_t i) {
    return (r && i < r->per_iteration_orth_time.size())
               ? fmt(r->per_iteration_orth_time[i])
               : std::string();
  };
  for (std::size_t i = 0; i < calls; ++i) {
    std::string ratio;
    if (qr && rqr && rqr->per_iteration_orth_time[i] > 0.0)
      ratio = fmt(qr->per_iteration_orth_time[i] / rqr->per_iteration_orth_time[i]);
    csv.row({"call", fmt(static_cast<long long>(i)), at(qr, i), at(rqr, i), at(c2, i), ratio,
             std::string()});
  }
  auto total = [](const apps::RsvdResult* r) {
    double t = 0.0;
    if (r)
      for (double v : r->per_iteration_orth_time) t += v;
    return t;
  };
  const double tq = total(qr), tr = total(rqr), tc = total(c2);
  std::string ratio;
  if (qr && rqr && tr > 0.0) ratio = fmt(tq / tr);
  csv.row({"total", std::string(), qr ? fmt(tq) : std::string(), rqr ? fmt(tr) : std::string(),
           c2 ? fmt(tc) : std::string(), ratio, fmt(out.sigma_max_rel_diff)});
}

}  // namespace cholqr::bench
