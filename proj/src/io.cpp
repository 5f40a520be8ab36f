#include "admmreg/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "admmreg/errors.hpp"

namespace admmreg {
namespace {

// Full round-trip precision for doubles in CSV output.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int read_pnm_token(std::istream& in) {
  // Skips whitespace and '#' comments between header tokens.
  while (true) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  return value;
}

}  // namespace

GridVector read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("read_pgm: cannot open " + path);
  std::string magic(2, '\0');
  in.read(magic.data(), 2);
  if (magic != "P5") throw IoError("read_pgm: " + path + " is not a binary PGM (P5)");
  const int cols = read_pnm_token(in);
  const int rows = read_pnm_token(in);
  const int maxval = read_pnm_token(in);
  if (cols <= 0 || rows <= 0 || maxval <= 0 || maxval > 255) {
    throw IoError("read_pgm: malformed header in " + path);
  }
  in.get();  // single whitespace after maxval
  std::vector<unsigned char> raw(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!in) throw IoError("read_pgm: truncated pixel data in " + path);
  GridVector img = GridVector::zeros(
      Shape{static_cast<std::size_t>(rows), static_cast<std::size_t>(cols)});
  for (std::size_t i = 0; i < raw.size(); ++i) {
    img[i] = static_cast<double>(raw[i]) / static_cast<double>(maxval);
  }
  return img;
}

void write_pgm(const std::string& path, const GridVector& image) {
  if (image.shape.size() != 2) throw IoError("write_pgm: image must be 2D");
  const std::size_t rows = image.shape[0];
  const std::size_t cols = image.shape[1];
  std::string content = "P5\n" + std::to_string(cols) + " " + std::to_string(rows) + "\n255\n";
  content.reserve(content.size() + rows * cols);
  for (std::size_t i = 0; i < rows * cols; ++i) {
    const double v = std::clamp(image[i], 0.0, 1.0);
    content.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v * 255.0))));
  }
  write_file_atomic(path, content);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("write_file_atomic: cannot open " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw IoError("write_file_atomic: write failed for " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw IoError("write_file_atomic: rename to " + path + " failed");
  }
}

std::string trace_to_csv(const std::vector<TraceRecord>& trace) {
  std::ostringstream os;
  os << "k,r_norm,s_norm,E,f_y,err,psnr,inner_iters\n";
  for (const TraceRecord& rec : trace) {
    os << rec.k << "," << fmt(rec.r_norm) << "," << fmt(rec.s_norm) << "," << fmt(rec.E) << ","
       << fmt(rec.f_y) << ",";
    if (rec.err) os << fmt(*rec.err);
    os << ",";
    if (rec.psnr) os << fmt(*rec.psnr);
    os << "," << rec.inner_iters << "\n";
  }
  return os.str();
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
  std::ostringstream os;
  os << "rho1,rho2,psnr,k_stop,stop_reason,wall_ms\n";
  for (const SweepCell& cell : cells) {
    os << fmt(cell.rho1) << "," << fmt(cell.rho2) << "," << fmt(cell.psnr) << "," << cell.k_stop
       << "," << to_string(cell.stop_reason) << "," << fmt(cell.wall_ms) << "\n";
  }
  return os.str();
}

std::string summary_to_json(const SummaryInfo& info) {
  nlohmann::json j;
  j["k_stop"] = info.k_stop;
  j["stop_reason"] = info.stop_reason;
  j["rho1"] = info.rho1;
  j["rho2"] = info.rho2;
  j["tau"] = info.tau;
  j["delta"] = info.delta;
  j["stop_threshold"] = info.stop_threshold;
  if (info.final_psnr) {
    j["final_psnr"] = *info.final_psnr;
  } else {
    j["final_psnr"] = nullptr;
  }
  if (info.final_err) {
    j["final_err"] = *info.final_err;
  } else {
    j["final_err"] = nullptr;
  }
  j["wall_time_ms"] = info.wall_time_ms;
  return j.dump(2) + "\n";
}

std::string signal_to_csv(const GridVector& signal) {
  std::ostringstream os;
  os << "index,value\n";
  for (std::size_t i = 0; i < signal.size(); ++i) {
    os << i << "," << fmt(signal[i]) << "\n";
  }
  return os.str();
}

}  // namespace admmreg
