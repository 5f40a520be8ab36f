// End-to-end checks of the command-line surface: exit codes, emitted files,
// determinism. The binary path comes in through ADMMREG_CLI_PATH.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "admmreg/io.hpp"
#include "admmreg/metrics.hpp"

using namespace admmreg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("admmreg_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

int run_cli(const std::string& args) {
  const std::string cmd = std::string(ADMMREG_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

std::size_t csv_rows(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(in, line)) ++rows;
  return rows > 0 ? rows - 1 : 0;  // minus header
}

json strip_timing(json j) {
  j.erase("wall_time_ms");
  return j;
}

}  // namespace

TEST_CASE("deconv1d: default flags stop by the discrepancy rule and write all files") {
  TempDir tmp;
  const int rc = run_cli("deconv1d --seed 3 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  for (const char* name : {"trace.csv", "summary.json", "reconstruction.csv", "truth.csv",
                           "observed.csv"}) {
    CHECK(fs::exists(tmp.path / name));
  }
  json summary = read_json(tmp.path / "summary.json");
  CHECK(summary["stop_reason"] == "discrepancy");
  CHECK(summary["k_stop"].get<std::size_t>() >= 1);
  CHECK(csv_rows(tmp.path / "trace.csv") == summary["k_stop"].get<std::size_t>());

  // The emitted threshold makes the stopping decision re-checkable offline.
  const double rho1 = summary["rho1"].get<double>();
  const double rho2 = summary["rho2"].get<double>();
  const double tau = summary["tau"].get<double>();
  const double delta = summary["delta"].get<double>();
  const double expect = std::max(rho1 * rho1, rho2 * rho2) * tau * tau * delta * delta;
  CHECK(summary["stop_threshold"].get<double>() == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("deconv1d: zero noise disables the rule and runs to max_iter") {
  TempDir tmp;
  const int rc = run_cli("deconv1d --rel-noise 0 --max-iter 200 --seed 3 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  json summary = read_json(tmp.path / "summary.json");
  CHECK(summary["stop_reason"] == "max_iter");
  CHECK(summary["k_stop"] == 200);
}

TEST_CASE("deconv1d: repeated runs with one seed are identical up to wall time") {
  TempDir a, b;
  REQUIRE(run_cli("deconv1d --seed 11 -o " + a.path.string()) == 0);
  REQUIRE(run_cli("deconv1d --seed 11 -o " + b.path.string()) == 0);
  CHECK(slurp(a.path / "trace.csv") == slurp(b.path / "trace.csv"));
  CHECK(slurp(a.path / "reconstruction.csv") == slurp(b.path / "reconstruction.csv"));
  CHECK(slurp(a.path / "observed.csv") == slurp(b.path / "observed.csv"));
  CHECK(strip_timing(read_json(a.path / "summary.json")) ==
        strip_timing(read_json(b.path / "summary.json")));
}

TEST_CASE("deblur: phantom TV restoration beats the degraded image") {
  TempDir tmp;
  const int rc = run_cli("deblur --size 64 --seed 5 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  GridVector truth = read_pgm((tmp.path / "truth.pgm").string());
  GridVector degraded = read_pgm((tmp.path / "degraded.pgm").string());
  GridVector restored = read_pgm((tmp.path / "restored.pgm").string());
  CHECK(psnr(restored, truth, 1.0) > psnr(degraded, truth, 1.0));
}

TEST_CASE("deblur: near-identity problem restores the input closely") {
  TempDir tmp;
  const int rc = run_cli(
      "deblur --size 64 --psf gaussian --psf-size 1 --rel-noise 0 --max-iter 60 --seed 5 -o " +
      tmp.path.string());
  REQUIRE(rc == 0);
  json summary = read_json(tmp.path / "summary.json");
  GridVector truth = read_pgm((tmp.path / "truth.pgm").string());
  CHECK(summary["final_err"].get<double>() <= 1e-3 * norm(truth));
}

TEST_CASE("deblur: framelet regularizers complete and improve PSNR") {
  for (const char* reg : {"frame-haar3", "frame-bspline1"}) {
    TempDir tmp;
    const int rc = run_cli("deblur --size 64 --regularizer " + std::string(reg) + " --seed 6 -o " +
                           tmp.path.string());
    REQUIRE(rc == 0);
    json summary = read_json(tmp.path / "summary.json");
    CHECK(summary["stop_reason"] == "discrepancy");
    GridVector truth = read_pgm((tmp.path / "truth.pgm").string());
    GridVector degraded = read_pgm((tmp.path / "degraded.pgm").string());
    CHECK(summary["final_psnr"].get<double>() > psnr(degraded, truth, 1.0));
  }
}

TEST_CASE("deblur: external pgm input, including non-square sizes") {
  TempDir tmp;
  // Build a 40x52 input by tiling a synthetic gradient pattern.
  GridVector img = GridVector::zeros(Shape{40, 52});
  for (std::size_t i = 0; i < 40; ++i) {
    for (std::size_t j = 0; j < 52; ++j) {
      img[i * 52 + j] = 0.5 + 0.5 * std::sin(0.37 * static_cast<double>(i)) *
                                   std::cos(0.21 * static_cast<double>(j));
    }
  }
  const fs::path input = tmp.path / "input.pgm";
  write_pgm(input.string(), img);

  const int rc = run_cli("deblur -i " + input.string() + " --psf-size 5 --psf-sigma 1.5 " +
                         "--max-iter 150 --seed 9 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  CHECK(fs::exists(tmp.path / "restored.pgm"));
  CHECK(fs::exists(tmp.path / "degraded.pgm"));
  CHECK_FALSE(fs::exists(tmp.path / "truth.pgm"));  // only written for phantom runs
  GridVector restored = read_pgm((tmp.path / "restored.pgm").string());
  CHECK(restored.shape == img.shape);
  GridVector degraded = read_pgm((tmp.path / "degraded.pgm").string());
  CHECK(psnr(restored, img, 1.0) > psnr(degraded, img, 1.0));
}

TEST_CASE("deblur: malformed pgm exits with the I/O code, bad flag with usage") {
  TempDir tmp;
  const fs::path bad = tmp.path / "broken.pgm";
  std::ofstream(bad) << "P5\n-3 2\n255\n";
  CHECK(run_cli("deblur -i " + bad.string() + " -o " + tmp.path.string()) == 2);
  CHECK(run_cli("deblur --regularizer wavelet -o " + tmp.path.string()) == 1);
  CHECK(run_cli("nonsense") == 1);
}

TEST_CASE("semiconv: full-length trace with interior PSNR peak and rule report") {
  TempDir tmp;
  const int rc =
      run_cli("semiconv --size 64 --max-iter 300 --seed 5 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  CHECK(csv_rows(tmp.path / "trace.csv") == 300);
  json summary = read_json(tmp.path / "summary.json");
  const std::size_t k_peak = summary["k_peak_psnr"].get<std::size_t>();
  CHECK(k_peak > 1);
  CHECK(k_peak < 300);
  REQUIRE_FALSE(summary["k_rule"].is_null());
  CHECK(summary["k_rule"].get<std::size_t>() <= 300);
  CHECK(summary.contains("k_rule_vs_peak"));
}

TEST_CASE("sweep: default grid emits 35 ordered rows plus the row trend flags") {
  TempDir tmp;
  const int rc = run_cli("sweep --size 32 --seed 7 -o " + tmp.path.string());
  REQUIRE(rc == 0);
  CHECK(csv_rows(tmp.path / "sweep.csv") == 35);
  json summary = read_json(tmp.path / "summary.json");
  CHECK(summary["cells"] == 35);
  CHECK(summary["rows"].size() == 7);
  for (const auto& row : summary["rows"]) {
    CHECK(row.contains("k_nonincreasing_in_rho1"));
  }

  TempDir again;
  REQUIRE(run_cli("sweep --size 32 --seed 7 -o " + again.path.string()) == 0);
  // Sweep CSV is identical apart from the wall-clock column.
  std::istringstream a(slurp(tmp.path / "sweep.csv")), b(slurp(again.path / "sweep.csv"));
  std::string la, lb;
  while (std::getline(a, la) && std::getline(b, lb)) {
    CHECK(la.substr(0, la.rfind(',')) == lb.substr(0, lb.rfind(',')));
  }
}

TEST_CASE("oracle-check: exit codes for success, usage, and the vacuous case") {
  CHECK(run_cli("oracle-check --trials 6 --n 4 --m 2 --seed 1") == 0);
  CHECK(run_cli("oracle-check --trials 2 --n 9 --m 2") == 1);
  CHECK(run_cli("oracle-check --trials 0") == 0);
}
