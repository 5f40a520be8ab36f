#ifndef ADMMREG_EXPERIMENTS_HPP_
#define ADMMREG_EXPERIMENTS_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "admmreg/admm.hpp"
#include "admmreg/grid_vector.hpp"
#include "admmreg/linear_operator.hpp"
#include "admmreg/metrics.hpp"
#include "admmreg/penalty.hpp"

namespace admmreg {

//! A fully assembled inverse-problem instance: operators, ground truth,
//! exact and observed data with ||b_obs - b_exact|| = delta by construction.
struct ProblemInstance {
  std::shared_ptr<const LinearOperator> a;
  std::shared_ptr<const LinearOperator> w;
  GridVector x_true;
  GridVector b_exact;
  GridVector b_obs;
  double delta = 0.0;
  Penalty penalty{0.001};
  std::uint64_t seed = 0;
};

//! b_exact + delta_target * g / ||g|| with g a seeded standard Gaussian draw,
//! so the injected noise norm equals delta_target exactly.
GridVector add_noise(const GridVector& b_exact, double delta_target, std::uint64_t seed);

struct Spike {
  std::size_t index;
  double amplitude;
};

//! Five spikes at {60, 140, 200, 280, 340} with amplitudes
//! {1, -0.8, 0.6, 1.2, -1}; scaled down for smaller grids in tests.
std::vector<Spike> default_spikes();

//! One-dimensional deconvolution instance: Gaussian kernel matrix on [0,1]
//! by the midpoint rule, sparse truth, W = I.
ProblemInstance gen_deconv1d(std::size_t n = 400, double gamma = 0.01,
                             const std::vector<Spike>& spikes = default_spikes(),
                             double rel_noise = 1e-2, std::uint64_t seed = 0,
                             double nu = 0.001);

//! Small 2D convolution kernel normalized to sum exactly 1.
struct Psf {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;  // row-major, center at ((rows-1)/2, (cols-1)/2)

  double sum() const;
};

Psf gen_psf_gaussian(std::size_t size, double sigma);
//! Anti-aliased line segment of the given pixel length and angle (degrees,
//! counterclockwise from horizontal) through the kernel center.
Psf gen_psf_motion(double length, double angle_deg);

//! Periodic blur operator on rows x cols images with the PSF embedded at
//! wrapped offsets around the origin.
std::shared_ptr<CirculantOperator2D> make_blur_operator(const Psf& psf, std::size_t rows,
                                                        std::size_t cols);

//! Deterministic piecewise-constant ellipse phantom with intensities in [0,1].
GridVector gen_phantom(std::size_t n);

//! Per-entry penalty weights for frame coefficients: `detail_weight` on every
//! detail subband, `lowpass_weight` (default 0, i.e. no shrinkage) on the
//! coarsest lowpass subband.
std::vector<double> frame_penalty_weights(const TightFrameOperator& frame,
                                          double detail_weight = 1.0,
                                          double lowpass_weight = 0.0);

struct ScanResult {
  RunResult run;
  std::size_t k_peak_psnr = 0;
  std::size_t k_min_err = 0;
};

//! Run to max_iter with the stopping rule disabled, recording PSNR and error
//! against the instance's ground truth every iteration. Ties in the argmax /
//! argmin break toward the smallest iteration index.
ScanResult semiconvergence_scan(const ProblemInstance& instance, AdmmConfig cfg,
                                std::size_t max_iter);

//! First k in the trace satisfying the discrepancy-style stopping rule for
//! the given parameters, or nullopt if never satisfied.
std::optional<std::size_t> first_k_satisfying_rule(const std::vector<TraceRecord>& trace,
                                                   double rho1, double rho2, double tau,
                                                   double delta);

struct SweepCell {
  double rho1 = 0.0;
  double rho2 = 0.0;
  double psnr = 0.0;
  std::size_t k_stop = 0;
  StopReason stop_reason = StopReason::max_iter;
  double wall_ms = 0.0;
};

//! One full run per (rho1, rho2) pair, all sharing the instance's b_obs.
//! Cells are emitted with rho2 varying in the outer loop, matching a table
//! with one row per rho2 and one column per rho1.
std::vector<SweepCell> sensitivity_sweep(const ProblemInstance& instance,
                                         const std::vector<double>& rho1_list,
                                         const std::vector<double>& rho2_list,
                                         const AdmmConfig& cfg_template);

}  // namespace admmreg

#endif  // ADMMREG_EXPERIMENTS_HPP_
