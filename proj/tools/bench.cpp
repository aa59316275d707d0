// Benchmark harness: regenerates the accuracy / runtime / scaling / sampling
// experiment families and the RSVD application benchmark as CSV, with full
// seed control. Exit codes: 0 success (breakdowns are recorded, not fatal),
// 2 usage error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

#include "bench/experiments.hpp"
#include "bench/grids.hpp"
#include "cholqr/errors.hpp"

using namespace cholqr;

namespace {

ShiftMode parse_shift_mode(const std::string& text) {
  if (text == "theory") return ShiftMode::theory();
  std::string value = text;
  if (value.rfind("fixed:", 0) == 0) value = value.substr(6);
  std::size_t pos = 0;
  const double eps = std::stod(value, &pos);
  if (pos != value.size()) throw std::invalid_argument("bad --shift-mode: '" + text + "'");
  return ShiftMode::fixed(eps);
}

std::vector<apps::Orth> parse_orths(const std::string& text) {
  std::vector<apps::Orth> out;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    if (item == "qr")
      out.push_back(apps::Orth::HouseholderQr);
    else if (item == "rqr")
      out.push_back(apps::Orth::RqrCholeskyQr);
    else if (item == "cholqr2")
      out.push_back(apps::Orth::CholeskyQr2);
    else
      throw std::invalid_argument("unknown orthogonalizer: '" + item + "'");
  }
  if (out.empty()) throw std::invalid_argument("empty --orth list");
  return out;
}

Index single_index(const std::string& text, const char* flag) {
  const auto grid = bench::parse_index_grid(text);
  if (grid.size() != 1)
    throw std::invalid_argument(std::string(flag) + " expects a single value here");
  return grid[0];
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CholeskyQR benchmark harness"};
  app.require_subcommand(1);

  // shared flag storage
  std::string m_text = "100000", n_text = "100", kappa_text = "1e5", rate_text;
  std::string methods_text = "all", shift_text = "fixed:1e-15", out_path, mm_path;
  std::string p_text = "1", orth_text = "qr,rqr", mode_text = "strong";
  Index l = 0, k = 20;
  int seeds = 3, power = 3;
  std::uint64_t seed0 = 1;
  bool diag = false;
  Index sp_rows = 50000, sp_cols = 5000;
  double density = 1e-4;

  auto add_common = [&](CLI::App* cmd, int default_seeds) {
    seeds = default_seeds;
    cmd->add_option("--methods", methods_text, "comma list or 'all'");
    cmd->add_option("--seeds", seeds, "number of seeds");
    cmd->add_option("--seed0", seed0, "first seed");
    cmd->add_option("--shift-mode", shift_text, "theory | fixed:<eps>");
    cmd->add_option("--l", l, "sketch rows (overrides --rate)");
    cmd->add_option("--rate", rate_text, "sampling rate l/n (grid for 'sampling')");
    cmd->add_flag("--diag", diag, "record cond(X) of preconditioned intermediates");
    cmd->add_option("--out", out_path, "output CSV")->required();
  };

  CLI::App* acc = app.add_subcommand("accuracy", "orthogonality/residual across kappa");
  acc->add_option("--m", m_text);
  acc->add_option("--n", n_text);
  acc->add_option("--kappa", kappa_text, "kappa grid, e.g. 1e3:1e15:log10");
  acc->add_option("--p", p_text);
  add_common(acc, 3);

  CLI::App* rt = app.add_subcommand("runtime", "wall clock across m");
  rt->add_option("--m", m_text, "m grid, e.g. 1e5:1e6");
  rt->add_option("--n", n_text);
  rt->add_option("--kappa", kappa_text);
  rt->add_option("--p", p_text);
  add_common(rt, 1);

  CLI::App* sc = app.add_subcommand("scaling", "strong/weak scaling across p");
  sc->add_option("--m", m_text, "total rows (strong) or rows per process (weak)");
  sc->add_option("--n", n_text);
  sc->add_option("--kappa", kappa_text);
  sc->add_option("--p", p_text, "process grid, e.g. 1:8:log10 or 1:8:1");
  sc->add_option("--mode", mode_text, "strong | weak");
  add_common(sc, 1);

  CLI::App* sa = app.add_subcommand("sampling", "cond(X) against sampling rate");
  sa->add_option("--m", m_text);
  sa->add_option("--n", n_text);
  sa->add_option("--kappa", kappa_text);
  add_common(sa, 200);

  CLI::App* rs = app.add_subcommand("rsvd", "RSVD orthogonalizer comparison");
  rs->add_option("--mm", mm_path, "Matrix Market file (default: synthetic sparse)");
  rs->add_option("--rows", sp_rows, "synthetic rows");
  rs->add_option("--cols", sp_cols, "synthetic cols");
  rs->add_option("--density", density, "synthetic density");
  rs->add_option("--k", k, "target rank");
  rs->add_option("--power", power, "power iterations");
  rs->add_option("--orth", orth_text, "comma list of qr,rqr,cholqr2");
  rs->add_option("--p", p_text, "workers");
  rs->add_option("--seed0", seed0, "seed");
  rs->add_option("--out", out_path, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (acc->parsed()) {
      bench::AccuracyArgs args;
      args.m = single_index(m_text, "--m");
      args.n = single_index(n_text, "--n");
      args.kappas = bench::parse_grid(kappa_text);
      args.methods = bench::parse_methods(methods_text);
      args.seeds = seeds;
      args.seed0 = seed0;
      args.l = l;
      if (!rate_text.empty()) args.rate = std::stod(rate_text);
      args.shift = parse_shift_mode(shift_text);
      args.diagnostics = diag;
      args.p = static_cast<int>(single_index(p_text, "--p"));
      bench::write_run_records(out_path, bench::run_accuracy(args));
    } else if (rt->parsed()) {
      bench::RuntimeArgs args;
      args.ms = bench::parse_index_grid(m_text);
      args.n = single_index(n_text, "--n");
      args.kappa = bench::parse_grid(kappa_text).at(0);
      args.methods = bench::parse_methods(methods_text);
      args.seeds = seeds;
      args.seed0 = seed0;
      args.l = l;
      if (!rate_text.empty()) args.rate = std::stod(rate_text);
      args.shift = parse_shift_mode(shift_text);
      args.diagnostics = diag;
      args.p = static_cast<int>(single_index(p_text, "--p"));
      bench::write_run_records(out_path, bench::run_runtime(args));
    } else if (sc->parsed()) {
      bench::ScalingArgs args;
      args.weak = mode_text == "weak";
      if (!args.weak && mode_text != "strong")
        throw std::invalid_argument("--mode must be strong or weak");
      args.m = single_index(m_text, "--m");
      args.n = single_index(n_text, "--n");
      args.kappa = bench::parse_grid(kappa_text).at(0);
      args.ps = bench::parse_int_grid(p_text);
      args.methods = bench::parse_methods(methods_text);
      args.seeds = seeds;
      args.seed0 = seed0;
      args.shift = parse_shift_mode(shift_text);
      args.diagnostics = diag;
      bench::write_scaling_records(out_path, bench::run_scaling(args));
    } else if (sa->parsed()) {
      bench::SamplingArgs args;
      args.m = single_index(m_text, "--m");
      args.n = single_index(n_text, "--n");
      args.kappa = bench::parse_grid(kappa_text).at(0);
      args.rates = bench::parse_grid(rate_text.empty() ? "1.0:3.0:0.1" : rate_text);
      args.seeds = seeds;
      args.seed0 = seed0;
      bench::write_sampling_records(out_path, bench::run_sampling(args));
    } else if (rs->parsed()) {
      bench::RsvdArgs args;
      args.mm_path = mm_path;
      args.rows = sp_rows;
      args.cols = sp_cols;
      args.density = density;
      args.k = k;
      args.power = power;
      args.orths = parse_orths(orth_text);
      args.seed = seed0;
      args.workers = static_cast<int>(single_index(p_text, "--p"));
      bench::write_rsvd_records(out_path, args, bench::run_rsvd(args));
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
