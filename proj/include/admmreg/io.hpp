#ifndef ADMMREG_IO_HPP_
#define ADMMREG_IO_HPP_

#include <optional>
#include <string>
#include <vector>

#include "admmreg/admm.hpp"
#include "admmreg/experiments.hpp"
#include "admmreg/grid_vector.hpp"

namespace admmreg {

//! 8-bit binary PGM (P5), mapped to unit scale [0,1].
GridVector read_pgm(const std::string& path);

//! Writes clamped unit-scale values as 8-bit P5. Atomic (temp + rename).
void write_pgm(const std::string& path, const GridVector& image);

//! Atomically replace `path` with `content`.
void write_file_atomic(const std::string& path, const std::string& content);

//! Trace CSV: header `k,r_norm,s_norm,E,f_y,err,psnr,inner_iters`;
//! err/psnr columns are empty when no ground truth was supplied.
std::string trace_to_csv(const std::vector<TraceRecord>& trace);

//! Sweep CSV: header `rho1,rho2,psnr,k_stop,stop_reason,wall_ms`.
std::string sweep_to_csv(const std::vector<SweepCell>& cells);

struct SummaryInfo {
  std::size_t k_stop = 0;
  std::string stop_reason;
  double rho1 = 0.0;
  double rho2 = 0.0;
  double tau = 0.0;
  double delta = 0.0;
  double stop_threshold = 0.0;
  std::optional<double> final_psnr;
  std::optional<double> final_err;
  double wall_time_ms = 0.0;
};

std::string summary_to_json(const SummaryInfo& info);

//! Two-column CSV `index,value` for 1D signals.
std::string signal_to_csv(const GridVector& signal);

}  // namespace admmreg

#endif  // ADMMREG_IO_HPP_
