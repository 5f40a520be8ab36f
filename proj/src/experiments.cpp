#include "admmreg/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "admmreg/errors.hpp"
#include "admmreg/rng.hpp"

namespace admmreg {

GridVector add_noise(const GridVector& b_exact, double delta_target, std::uint64_t seed) {
  if (delta_target < 0.0) throw ParameterError("add_noise: delta_target must be nonnegative");
  if (delta_target == 0.0) return b_exact;
  Rng rng(seed);
  GridVector g = GridVector::zeros(b_exact.shape);
  double gn = 0.0;
  while (gn == 0.0) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.normal();
    gn = norm(g);
  }
  return axpy(b_exact, delta_target / gn, g);
}

std::vector<Spike> default_spikes() {
  return {{60, 1.0}, {140, -0.8}, {200, 0.6}, {280, 1.2}, {340, -1.0}};
}

ProblemInstance gen_deconv1d(std::size_t n, double gamma, const std::vector<Spike>& spikes,
                             double rel_noise, std::uint64_t seed, double nu) {
  if (rel_noise < 0.0) throw ParameterError("gen_deconv1d: rel_noise must be nonnegative");
  ProblemInstance inst;
  inst.seed = seed;
  inst.a = make_gaussian_kernel_1d(gamma, n);
  inst.w = std::make_shared<IdentityOperator>(Shape{n});
  inst.x_true = GridVector::zeros(Shape{n});
  for (const Spike& sp : spikes) {
    if (sp.index >= n) {
      throw ParameterError("gen_deconv1d: spike index " + std::to_string(sp.index) +
                           " out of range for n = " + std::to_string(n));
    }
    inst.x_true[sp.index] = sp.amplitude;
  }
  inst.b_exact = inst.a->apply(inst.x_true);
  inst.delta = rel_noise * norm(inst.b_exact);
  inst.b_obs = add_noise(inst.b_exact, inst.delta, derive_seed(seed, 1));
  inst.penalty = Penalty(nu);
  return inst;
}

double Psf::sum() const {
  double acc = 0.0;
  for (double v : data) acc += v;
  return acc;
}

namespace {

void normalize_kernel(Psf& psf) {
  const double s = psf.sum();
  if (!(s > 0.0)) throw ParameterError("psf: kernel mass is zero");
  for (double& v : psf.data) v /= s;
}

}  // namespace

Psf gen_psf_gaussian(std::size_t size, double sigma) {
  if (size < 1) throw ParameterError("gen_psf_gaussian: size must be >= 1");
  if (!(sigma > 0.0)) throw ParameterError("gen_psf_gaussian: sigma must be positive");
  Psf psf;
  psf.rows = size;
  psf.cols = size;
  psf.data.resize(size * size);
  const double c = (static_cast<double>(size) - 1.0) / 2.0;
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      const double di = static_cast<double>(i) - c;
      const double dj = static_cast<double>(j) - c;
      psf.data[i * size + j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
    }
  }
  normalize_kernel(psf);
  return psf;
}

Psf gen_psf_motion(double length, double angle_deg) {
  if (!(length >= 1.0)) throw ParameterError("gen_psf_motion: length must be >= 1");
  const double half = (length - 1.0) / 2.0;
  const double theta = angle_deg * M_PI / 180.0;
  const double dx = std::cos(theta);
  const double dy = -std::sin(theta);  // image rows grow downward

  const std::size_t halfspan = static_cast<std::size_t>(std::ceil(half)) + 1;
  const std::size_t size = 2 * halfspan + 1;
  Psf psf;
  psf.rows = size;
  psf.cols = size;
  psf.data.assign(size * size, 0.0);
  const double c = static_cast<double>(halfspan);

  // Dense sampling along the segment with bilinear splatting.
  const std::size_t samples = std::max<std::size_t>(1, static_cast<std::size_t>(length * 64.0));
  for (std::size_t s = 0; s < samples; ++s) {
    const double t = samples == 1
                         ? 0.0
                         : -half + 2.0 * half * static_cast<double>(s) /
                                       static_cast<double>(samples - 1);
    const double x = c + t * dx;
    const double y = c + t * dy;
    const std::size_t j0 = static_cast<std::size_t>(std::floor(x));
    const std::size_t i0 = static_cast<std::size_t>(std::floor(y));
    const double fx = x - std::floor(x);
    const double fy = y - std::floor(y);
    psf.data[i0 * size + j0] += (1.0 - fx) * (1.0 - fy);
    psf.data[i0 * size + j0 + 1] += fx * (1.0 - fy);
    psf.data[(i0 + 1) * size + j0] += (1.0 - fx) * fy;
    psf.data[(i0 + 1) * size + j0 + 1] += fx * fy;
  }
  normalize_kernel(psf);
  return psf;
}

std::shared_ptr<CirculantOperator2D> make_blur_operator(const Psf& psf, std::size_t rows,
                                                        std::size_t cols) {
  if (psf.rows > rows || psf.cols > cols) {
    throw ParameterError("make_blur_operator: psf larger than image");
  }
  std::vector<double> kernel(rows * cols, 0.0);
  const long ci = (static_cast<long>(psf.rows) - 1) / 2;
  const long cj = (static_cast<long>(psf.cols) - 1) / 2;
  for (std::size_t i = 0; i < psf.rows; ++i) {
    for (std::size_t j = 0; j < psf.cols; ++j) {
      long oi = (static_cast<long>(i) - ci) % static_cast<long>(rows);
      long oj = (static_cast<long>(j) - cj) % static_cast<long>(cols);
      if (oi < 0) oi += static_cast<long>(rows);
      if (oj < 0) oj += static_cast<long>(cols);
      kernel[static_cast<std::size_t>(oi) * cols + static_cast<std::size_t>(oj)] +=
          psf.data[i * psf.cols + j];
    }
  }
  return std::make_shared<CirculantOperator2D>(std::move(kernel), rows, cols);
}

GridVector gen_phantom(std::size_t n) {
  if (n < 32) throw ParameterError("gen_phantom: n must be >= 32");
  struct Ellipse {
    double add, a, b, x0, y0, phi_deg;
  };
  // Piecewise-constant ellipse stack in the unit square, intensities in [0,1].
  static const Ellipse ellipses[] = {
      {1.0, 0.69, 0.92, 0.0, 0.0, 0.0},
      {-0.8, 0.6624, 0.874, 0.0, -0.0184, 0.0},
      {-0.2, 0.11, 0.31, 0.22, 0.0, -18.0},
      {-0.2, 0.16, 0.41, -0.22, 0.0, 18.0},
      {0.1, 0.21, 0.25, 0.0, 0.35, 0.0},
      {0.1, 0.046, 0.046, 0.0, 0.1, 0.0},
      {0.1, 0.046, 0.046, 0.0, -0.1, 0.0},
      {0.1, 0.046, 0.023, -0.08, -0.605, 0.0},
      {0.1, 0.023, 0.023, 0.0, -0.605, 0.0},
      {0.1, 0.023, 0.046, 0.06, -0.605, 0.0},
  };
  GridVector img = GridVector::zeros(Shape{n, n});
  for (std::size_t i = 0; i < n; ++i) {
    const double y = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    for (std::size_t j = 0; j < n; ++j) {
      const double x = -1.0 + 2.0 * (static_cast<double>(j) + 0.5) / static_cast<double>(n);
      double v = 0.0;
      for (const Ellipse& e : ellipses) {
        const double t = e.phi_deg * M_PI / 180.0;
        const double xr = (x - e.x0) * std::cos(t) + (y - e.y0) * std::sin(t);
        const double yr = -(x - e.x0) * std::sin(t) + (y - e.y0) * std::cos(t);
        if ((xr / e.a) * (xr / e.a) + (yr / e.b) * (yr / e.b) <= 1.0) v += e.add;
      }
      img[i * n + j] = std::clamp(v, 0.0, 1.0);
    }
  }
  return img;
}

std::vector<double> frame_penalty_weights(const TightFrameOperator& frame, double detail_weight,
                                          double lowpass_weight) {
  const Shape& rshape = frame.range_shape();
  const std::size_t channels = frame.channels();
  const std::size_t lowpass = frame.lowpass_channel();
  std::vector<double> w(shape_size(rshape));
  for (std::size_t p = 0; p < w.size() / channels; ++p) {
    for (std::size_t c = 0; c < channels; ++c) {
      w[p * channels + c] = (c == lowpass) ? lowpass_weight : detail_weight;
    }
  }
  return w;
}

ScanResult semiconvergence_scan(const ProblemInstance& instance, AdmmConfig cfg,
                                std::size_t max_iter) {
  cfg.delta = 0.0;  // stopping rule disabled; scan runs the full window
  cfg.plateau_stop = false;
  cfg.max_iter = max_iter;
  AdmmSolver solver(*instance.a, *instance.w, instance.b_obs, instance.penalty, cfg);
  ScanResult result;
  result.run = solver.run(&instance.x_true);

  double best_psnr = -std::numeric_limits<double>::infinity();
  double best_err = std::numeric_limits<double>::infinity();
  for (const TraceRecord& rec : result.run.trace) {
    if (rec.psnr && *rec.psnr > best_psnr) {
      best_psnr = *rec.psnr;
      result.k_peak_psnr = rec.k;
    }
    if (rec.err && *rec.err < best_err) {
      best_err = *rec.err;
      result.k_min_err = rec.k;
    }
  }
  return result;
}

std::optional<std::size_t> first_k_satisfying_rule(const std::vector<TraceRecord>& trace,
                                                   double rho1, double rho2, double tau,
                                                   double delta) {
  const double thr = std::max(rho1 * rho1, rho2 * rho2) * tau * tau * delta * delta;
  for (const TraceRecord& rec : trace) {
    const double lhs = rho1 * rho1 * rec.r_norm * rec.r_norm +
                       rho2 * rho2 * rec.s_norm * rec.s_norm;
    if (lhs <= thr) return rec.k;
  }
  return std::nullopt;
}

std::vector<SweepCell> sensitivity_sweep(const ProblemInstance& instance,
                                         const std::vector<double>& rho1_list,
                                         const std::vector<double>& rho2_list,
                                         const AdmmConfig& cfg_template) {
  if (rho1_list.empty() || rho2_list.empty()) {
    throw ParameterError("sensitivity_sweep: parameter lists must be nonempty");
  }
  std::vector<SweepCell> cells;
  cells.reserve(rho1_list.size() * rho2_list.size());
  for (double rho2 : rho2_list) {
    for (double rho1 : rho1_list) {
      AdmmConfig cfg = cfg_template;
      cfg.rho1 = rho1;
      cfg.rho2 = rho2;
      cfg.delta = instance.delta;
      AdmmSolver solver(*instance.a, *instance.w, instance.b_obs, instance.penalty, cfg);
      RunResult run = solver.run(&instance.x_true);
      SweepCell cell;
      cell.rho1 = rho1;
      cell.rho2 = rho2;
      cell.k_stop = run.k_stop;
      cell.stop_reason = run.stop_reason;
      cell.wall_ms = run.wall_ms;
      cell.psnr = psnr_or_none(run.state.x, instance.x_true, 1.0).value_or(
          std::numeric_limits<double>::infinity());
      cells.push_back(cell);
    }
  }
  return cells;
}

}  // namespace admmreg
