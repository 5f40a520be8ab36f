// Command-line toolkit around the admmreg library: one subcommand per
// experiment family plus an oracle agreement check.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "admmreg/admm.hpp"
#include "admmreg/errors.hpp"
#include "admmreg/experiments.hpp"
#include "admmreg/io.hpp"
#include "admmreg/metrics.hpp"
#include "admmreg/oracle.hpp"
#include "admmreg/rng.hpp"

namespace fs = std::filesystem;
using namespace admmreg;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitIo = 2;
constexpr int kExitSolver = 3;
constexpr int kExitCheckFailed = 4;

struct CommonOpts {
  double rho1 = 1000.0;
  double rho2 = 10.0;
  double tau = 1.0001;
  double nu = 0.001;
  double rel_noise = -1.0;  // <0: unset
  double delta = -1.0;      // <0: unset
  std::size_t max_iter = 500;
  std::string x_solver = "auto";
  double cg_tol = 1e-10;
  std::size_t cg_max_iter = 500;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  bool check_invariants = false;
};

void add_common_flags(CLI::App* cmd, CommonOpts* opts) {
  cmd->add_option("--rho1", opts->rho1, "Augmented Lagrangian weight on Ax - b");
  cmd->add_option("--rho2", opts->rho2, "Augmented Lagrangian weight on Wx - y");
  cmd->add_option("--tau", opts->tau, "Stopping rule factor (> 1)");
  cmd->add_option("--nu", opts->nu, "Strong convexity weight of the penalty");
  cmd->add_option("--rel-noise", opts->rel_noise, "Noise norm relative to ||b_exact||");
  cmd->add_option("--delta", opts->delta, "Absolute noise norm (overrides --rel-noise)");
  cmd->add_option("--max-iter", opts->max_iter, "Iteration cap");
  cmd->add_option("--x-solver", opts->x_solver, "x-subproblem solver: auto|spectral|dense|cg")
      ->check(CLI::IsMember({"auto", "spectral", "dense", "cg"}));
  cmd->add_option("--cg-tol", opts->cg_tol, "CG relative residual tolerance");
  cmd->add_option("--cg-max-iter", opts->cg_max_iter, "CG iteration cap");
  cmd->add_option("--seed", opts->seed, "Seed for all randomness in this run");
  cmd->add_option("-o,--out-dir", opts->out_dir, "Output directory");
  cmd->add_flag("--check-invariants", opts->check_invariants,
                "Verify subgradient membership and energy descent every iteration");
}

XSolverKind parse_solver(const std::string& name) {
  if (name == "spectral") return XSolverKind::spectral;
  if (name == "dense") return XSolverKind::dense;
  if (name == "cg") return XSolverKind::cg;
  return XSolverKind::automatic;
}

AdmmConfig to_config(const CommonOpts& opts, double delta) {
  AdmmConfig cfg;
  cfg.rho1 = opts.rho1;
  cfg.rho2 = opts.rho2;
  cfg.tau = opts.tau;
  cfg.delta = delta;
  cfg.max_iter = opts.max_iter;
  cfg.x_solver = parse_solver(opts.x_solver);
  cfg.cg_tol = opts.cg_tol;
  cfg.cg_max_iter = opts.cg_max_iter;
  cfg.check_invariants = opts.check_invariants;
  return cfg;
}

void print_invariants(const AdmmConfig& cfg, const RunResult& run) {
  if (!cfg.check_invariants) return;
  std::cout << "invariants: subgradient " << run.invariants.max_subgradient_violation
            << ", multiplier mismatch " << run.invariants.max_multiplier_mismatch
            << ", max E increase " << run.invariants.max_energy_increase
            << ", max decrement violation " << run.invariants.max_decrement_violation << "\n";
}

SummaryInfo make_summary(const RunResult& run, const AdmmConfig& cfg,
                         const GridVector* truth) {
  SummaryInfo info;
  info.k_stop = run.k_stop;
  info.stop_reason = to_string(run.stop_reason);
  info.rho1 = cfg.rho1;
  info.rho2 = cfg.rho2;
  info.tau = cfg.tau;
  info.delta = cfg.delta;
  info.stop_threshold = run.stop_threshold;
  info.wall_time_ms = run.wall_ms;
  if (truth && run.state.x.size()) {
    info.final_err = norm(run.state.x - *truth);
    info.final_psnr = psnr_or_none(run.state.x, *truth, 1.0);
  }
  return info;
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

// --------------------------------------------------------------------------
// deconv1d

struct Deconv1dOpts {
  CommonOpts common;
  std::size_t n = 400;
  double gamma = 0.01;
};

int run_deconv1d(const Deconv1dOpts& opts) {
  const double rel = opts.common.rel_noise < 0.0 ? 1e-2 : opts.common.rel_noise;
  ProblemInstance inst =
      gen_deconv1d(opts.n, opts.gamma, default_spikes(), rel, opts.common.seed, opts.common.nu);
  if (opts.common.delta >= 0.0) {
    inst.delta = opts.common.delta;
    inst.b_obs = add_noise(inst.b_exact, inst.delta, derive_seed(opts.common.seed, 1));
  }
  AdmmConfig cfg = to_config(opts.common, inst.delta);
  AdmmSolver solver(*inst.a, *inst.w, inst.b_obs, inst.penalty, cfg);
  RunResult run = solver.run(&inst.x_true);

  ensure_out_dir(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);
  write_file_atomic((dir / "trace.csv").string(), trace_to_csv(run.trace));
  write_file_atomic((dir / "summary.json").string(),
                    summary_to_json(make_summary(run, cfg, &inst.x_true)));
  write_file_atomic((dir / "reconstruction.csv").string(), signal_to_csv(run.state.x));
  write_file_atomic((dir / "truth.csv").string(), signal_to_csv(inst.x_true));
  write_file_atomic((dir / "observed.csv").string(), signal_to_csv(inst.b_obs));
  std::cout << "deconv1d: k_stop=" << run.k_stop << " reason=" << to_string(run.stop_reason)
            << " err=" << (run.trace.empty() ? 0.0 : run.trace.back().err.value_or(0.0))
            << "\n";
  print_invariants(cfg, run);
  return kExitOk;
}

// --------------------------------------------------------------------------
// deblur / semiconv / sweep share the image pipeline

struct ImageOpts {
  CommonOpts common;
  std::string input;  // PGM path; empty -> phantom
  std::size_t size = 128;
  std::string regularizer = "tv";
  std::string psf = "gaussian";
  std::size_t psf_size = 9;
  double psf_sigma = 2.0;
  double psf_len = 35.0;
  double psf_angle = 50.0;
};

void add_image_flags(CLI::App* cmd, ImageOpts* opts) {
  add_common_flags(cmd, &opts->common);
  cmd->add_option("-i,--input", opts->input, "Input PGM (P5); omitted -> built-in phantom");
  cmd->add_option("--size", opts->size, "Phantom size when no input image is given");
  cmd->add_option("--regularizer", opts->regularizer,
                  "Sparsifying transform: tv | frame-haar3 | frame-bspline1")
      ->check(CLI::IsMember({"tv", "frame-haar3", "frame-bspline1"}));
  cmd->add_option("--psf", opts->psf, "Blur kind: gaussian | motion")
      ->check(CLI::IsMember({"gaussian", "motion"}));
  cmd->add_option("--psf-size", opts->psf_size, "Gaussian PSF side length");
  cmd->add_option("--psf-sigma", opts->psf_sigma, "Gaussian PSF sigma");
  cmd->add_option("--psf-len", opts->psf_len, "Motion blur length in pixels");
  cmd->add_option("--psf-angle", opts->psf_angle, "Motion blur angle in degrees");
}

ProblemInstance build_image_instance(const ImageOpts& opts, bool* from_phantom) {
  ProblemInstance inst;
  inst.seed = opts.common.seed;
  if (opts.input.empty()) {
    inst.x_true = gen_phantom(opts.size);
    if (from_phantom) *from_phantom = true;
  } else {
    inst.x_true = read_pgm(opts.input);
    if (from_phantom) *from_phantom = false;
  }
  const std::size_t rows = inst.x_true.shape[0];
  const std::size_t cols = inst.x_true.shape[1];

  Psf psf = opts.psf == "motion" ? gen_psf_motion(opts.psf_len, opts.psf_angle)
                                 : gen_psf_gaussian(opts.psf_size, opts.psf_sigma);
  inst.a = make_blur_operator(psf, rows, cols);

  if (opts.regularizer == "tv") {
    inst.w = std::make_shared<GradientOperator2D>(rows, cols);
    inst.penalty = Penalty(opts.common.nu);
  } else {
    const FrameFamily family =
        opts.regularizer == "frame-haar3" ? FrameFamily::haar : FrameFamily::linear_bspline;
    const std::size_t levels = opts.regularizer == "frame-haar3" ? 3 : 1;
    auto frame = make_tight_frame(family, levels, Shape{rows, cols});
    inst.penalty = Penalty(opts.common.nu, frame_penalty_weights(*frame));
    inst.w = frame;
  }

  inst.b_exact = inst.a->apply(inst.x_true);
  if (opts.common.delta >= 0.0) {
    inst.delta = opts.common.delta;
  } else if (opts.common.rel_noise >= 0.0) {
    inst.delta = opts.common.rel_noise * norm(inst.b_exact);
  } else {
    // Default noise: per-pixel RMS 1e-3 on unit-scale images.
    inst.delta = 1e-3 * std::sqrt(static_cast<double>(rows * cols));
  }
  inst.b_obs = add_noise(inst.b_exact, inst.delta, derive_seed(opts.common.seed, 1));
  return inst;
}

int run_deblur(const ImageOpts& opts) {
  bool from_phantom = false;
  ProblemInstance inst = build_image_instance(opts, &from_phantom);
  AdmmConfig cfg = to_config(opts.common, inst.delta);
  AdmmSolver solver(*inst.a, *inst.w, inst.b_obs, inst.penalty, cfg);
  RunResult run = solver.run(&inst.x_true);

  ensure_out_dir(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);
  write_file_atomic((dir / "trace.csv").string(), trace_to_csv(run.trace));
  write_file_atomic((dir / "summary.json").string(),
                    summary_to_json(make_summary(run, cfg, &inst.x_true)));
  write_pgm((dir / "degraded.pgm").string(), inst.b_obs);
  write_pgm((dir / "restored.pgm").string(), run.state.x);
  if (from_phantom) write_pgm((dir / "truth.pgm").string(), inst.x_true);

  const auto restored_psnr = psnr_or_none(run.state.x, inst.x_true, 1.0);
  const auto degraded_psnr = psnr_or_none(inst.b_obs, inst.x_true, 1.0);
  std::cout << "deblur(" << opts.regularizer << "): k_stop=" << run.k_stop
            << " reason=" << to_string(run.stop_reason)
            << " psnr_degraded=" << (degraded_psnr ? *degraded_psnr : 0.0)
            << " psnr_restored=" << (restored_psnr ? *restored_psnr : 0.0) << "\n";
  print_invariants(cfg, run);
  return kExitOk;
}

int run_semiconv(const ImageOpts& opts) {
  ProblemInstance inst = build_image_instance(opts, nullptr);
  AdmmConfig cfg = to_config(opts.common, inst.delta);
  ScanResult scan = semiconvergence_scan(inst, cfg, opts.common.max_iter);

  const auto k_rule =
      first_k_satisfying_rule(scan.run.trace, cfg.rho1, cfg.rho2, cfg.tau, inst.delta);

  ensure_out_dir(opts.common.out_dir);
  const fs::path dir(opts.common.out_dir);
  write_file_atomic((dir / "trace.csv").string(), trace_to_csv(scan.run.trace));

  nlohmann::json j;
  j["max_iter"] = opts.common.max_iter;
  j["k_peak_psnr"] = scan.k_peak_psnr;
  j["k_min_err"] = scan.k_min_err;
  j["rho1"] = cfg.rho1;
  j["rho2"] = cfg.rho2;
  j["tau"] = cfg.tau;
  j["delta"] = inst.delta;
  j["stop_threshold"] =
      std::max(cfg.rho1 * cfg.rho1, cfg.rho2 * cfg.rho2) * cfg.tau * cfg.tau * inst.delta * inst.delta;
  if (k_rule) {
    j["k_rule"] = *k_rule;
    j["k_rule_vs_peak"] = static_cast<long long>(*k_rule) -
                          static_cast<long long>(scan.k_peak_psnr);
  } else {
    j["k_rule"] = nullptr;
    j["k_rule_vs_peak"] = nullptr;
  }
  write_file_atomic((dir / "summary.json").string(), j.dump(2) + "\n");

  std::cout << "semiconv: k_peak_psnr=" << scan.k_peak_psnr << " k_min_err=" << scan.k_min_err
            << " k_rule=" << (k_rule ? std::to_string(*k_rule) : std::string("none")) << "\n";
  return kExitOk;
}

struct SweepOpts {
  ImageOpts image;
  std::vector<double> rho1_list = {250.0, 500.0, 1000.0, 2000.0, 4000.0};
  std::vector<double> rho2_list = {2.5, 5.0, 10.0, 20.0, 40.0, 80.0, 160.0};
};

int run_sweep(const SweepOpts& opts) {
  ProblemInstance inst = build_image_instance(opts.image, nullptr);
  AdmmConfig cfg = to_config(opts.image.common, inst.delta);
  std::vector<SweepCell> cells = sensitivity_sweep(inst, opts.rho1_list, opts.rho2_list, cfg);

  ensure_out_dir(opts.image.common.out_dir);
  const fs::path dir(opts.image.common.out_dir);
  write_file_atomic((dir / "sweep.csv").string(), sweep_to_csv(cells));

  // Per-row trend: k_stop nonincreasing as rho1 grows for each fixed rho2.
  nlohmann::json rows = nlohmann::json::array();
  bool all_monotone = true;
  const std::size_t ncols = opts.rho1_list.size();
  for (std::size_t r = 0; r < opts.rho2_list.size(); ++r) {
    bool monotone = true;
    for (std::size_t c = 1; c < ncols; ++c) {
      if (cells[r * ncols + c].k_stop > cells[r * ncols + c - 1].k_stop) monotone = false;
    }
    nlohmann::json row;
    row["rho2"] = opts.rho2_list[r];
    row["k_nonincreasing_in_rho1"] = monotone;
    rows.push_back(row);
    all_monotone = all_monotone && monotone;
  }
  nlohmann::json j;
  j["cells"] = cells.size();
  j["rows"] = rows;
  j["all_rows_monotone"] = all_monotone;
  j["delta"] = inst.delta;
  j["tau"] = cfg.tau;
  write_file_atomic((dir / "summary.json").string(), j.dump(2) + "\n");

  std::cout << "sweep: " << cells.size() << " cells, all_rows_monotone="
            << (all_monotone ? "true" : "false") << "\n";
  return kExitOk;
}

// --------------------------------------------------------------------------
// oracle-check

struct OracleOpts {
  std::size_t trials = 20;
  std::size_t n = 4;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  double tol = 1e-4;
  std::size_t max_iter = 100000;
};

int run_oracle_check(const OracleOpts& opts) {
  if (opts.n > 8) {
    std::cerr << "oracle-check: n must be <= 8 (sign-pattern enumeration cap)\n";
    return kExitUsage;
  }
  if (opts.m == 0 || opts.n == 0) {
    std::cerr << "oracle-check: m and n must be positive\n";
    return kExitUsage;
  }
  Penalty f(0.001);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    Rng rng(derive_seed(opts.seed, trial));
    DenseMatrix a(opts.m, opts.n);
    for (auto& v : a.data) v = rng.normal();
    std::vector<double> x0(opts.n, 0.0);
    for (auto& v : x0) {
      if (rng.uniform() < 0.6) v = rng.normal();
    }
    std::vector<double> b = matvec(a, x0);

    OracleSolution sol = solve_small(a, b, f);
    if (sol.status != OracleStatus::optimal) {
      std::cerr << "oracle-check: trial " << trial << " (seed " << opts.seed
                << "): oracle reported infeasible on consistent data\n";
      return kExitCheckFailed;
    }

    DenseOperator op(a);
    IdentityOperator w(Shape{opts.n});
    AdmmConfig cfg;
    cfg.rho1 = 1.0;
    cfg.rho2 = 0.2;
    cfg.max_iter = 1;
    AdmmSolver solver(op, w, GridVector(b, Shape{opts.m}), f, cfg);
    AdmmState state = solver.initial_state();
    double err = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < opts.max_iter && err > opts.tol; ++k) {
      solver.step(state);
      err = norm(state.x - sol.x);
    }
    worst = std::max(worst, err);
    if (err > opts.tol) {
      std::cerr << "oracle-check: trial " << trial << " (seed " << opts.seed << ") exceeded "
                << opts.tol << ": err=" << err << "\n";
      return kExitCheckFailed;
    }
  }
  std::cout << "oracle-check: " << opts.trials << " trials, max err " << worst << " <= "
            << opts.tol << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ADMM iterative regularization toolkit for ill-posed linear inverse problems"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (key=value), overridden by flags");

  Deconv1dOpts deconv;
  // This instance's kernel has tiny norm; rho defaults are scaled for it.
  deconv.common.rho1 = 1e8;
  deconv.common.rho2 = 100.0;
  deconv.common.max_iter = 50000;
  deconv.common.out_dir = "out_deconv1d";
  CLI::App* cmd_deconv = app.add_subcommand("deconv1d", "1D Gaussian deconvolution (sparse truth)");
  add_common_flags(cmd_deconv, &deconv.common);
  cmd_deconv->add_option("--n", deconv.n, "Grid size");
  cmd_deconv->add_option("--gamma", deconv.gamma, "Kernel width");

  ImageOpts deblur;
  deblur.common.out_dir = "out_deblur";
  CLI::App* cmd_deblur = app.add_subcommand("deblur", "Image deblurring with TV or framelets");
  add_image_flags(cmd_deblur, &deblur);

  ImageOpts semiconv;
  semiconv.common.out_dir = "out_semiconv";
  semiconv.common.max_iter = 500;
  CLI::App* cmd_semiconv =
      app.add_subcommand("semiconv", "Run past the stopping rule and record PSNR vs iteration");
  add_image_flags(cmd_semiconv, &semiconv);

  SweepOpts sweep;
  sweep.image.common.out_dir = "out_sweep";
  sweep.image.common.max_iter = 2000;
  CLI::App* cmd_sweep = app.add_subcommand("sweep", "Sensitivity table over (rho1, rho2)");
  add_image_flags(cmd_sweep, &sweep.image);
  cmd_sweep->add_option("--rho1-list", sweep.rho1_list, "rho1 grid")->delimiter(',');
  cmd_sweep->add_option("--rho2-list", sweep.rho2_list, "rho2 grid")->delimiter(',');

  OracleOpts oracle;
  CLI::App* cmd_oracle =
      app.add_subcommand("oracle-check", "Exact-data agreement with the sign-pattern oracle");
  cmd_oracle->add_option("--trials", oracle.trials, "Number of random instances");
  cmd_oracle->add_option("--n", oracle.n, "Unknowns per instance (<= 8)");
  cmd_oracle->add_option("--m", oracle.m, "Equations per instance");
  cmd_oracle->add_option("--seed", oracle.seed, "Base seed");
  cmd_oracle->add_option("--tol", oracle.tol, "Agreement tolerance");
  cmd_oracle->add_option("--max-iter", oracle.max_iter, "Iteration cap per trial");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_deconv->parsed()) return run_deconv1d(deconv);
    if (cmd_deblur->parsed()) return run_deblur(deblur);
    if (cmd_semiconv->parsed()) return run_semiconv(semiconv);
    if (cmd_sweep->parsed()) return run_sweep(sweep);
    if (cmd_oracle->parsed()) return run_oracle_check(oracle);
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SolverError& e) {
    std::cerr << "solver failure: " << e.what() << " (residual " << e.residual() << ")\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
