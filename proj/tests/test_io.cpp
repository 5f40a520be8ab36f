#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "admmreg/errors.hpp"
#include "admmreg/experiments.hpp"
#include "admmreg/io.hpp"

using namespace admmreg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("admmreg_io_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("pgm round trip is exact on 8-bit data") {
  TempDir tmp;
  GridVector img = GridVector::zeros(Shape{5, 7});
  for (std::size_t i = 0; i < img.size(); ++i) {
    img[i] = static_cast<double>((i * 37) % 256) / 255.0;
  }
  const std::string path = (tmp.path / "img.pgm").string();
  write_pgm(path, img);
  GridVector back = read_pgm(path);
  REQUIRE(back.shape == img.shape);
  for (std::size_t i = 0; i < img.size(); ++i) {
    CHECK(back[i] == doctest::Approx(img[i]).epsilon(1e-12));
  }
}

TEST_CASE("pgm writer clamps out-of-range values") {
  TempDir tmp;
  GridVector img({-0.5, 0.0, 0.5, 2.0}, Shape{2, 2});
  const std::string path = (tmp.path / "clamp.pgm").string();
  write_pgm(path, img);
  GridVector back = read_pgm(path);
  CHECK(back[0] == 0.0);
  CHECK(back[3] == 1.0);
}

TEST_CASE("malformed pgm input raises IoError") {
  TempDir tmp;
  const std::string path = (tmp.path / "bad.pgm").string();
  {
    std::ofstream out(path);
    out << "P2\n2 2\n255\n0 0 0 0\n";  // ASCII variant, not P5
  }
  CHECK_THROWS_AS(read_pgm(path), IoError);
  CHECK_THROWS_AS(read_pgm((tmp.path / "missing.pgm").string()), IoError);
}

TEST_CASE("atomic write replaces content and leaves no temp file") {
  TempDir tmp;
  const std::string path = (tmp.path / "data.txt").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  std::ifstream in(path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(content == "second");
  CHECK_FALSE(fs::exists(path + ".tmp"));
}

TEST_CASE("trace csv layout: header, blank metric columns without ground truth") {
  std::vector<TraceRecord> trace(2);
  trace[0].k = 1;
  trace[0].r_norm = 0.5;
  trace[0].s_norm = 0.25;
  trace[0].E = 1.5;
  trace[0].f_y = 2.0;
  trace[0].inner_iters = 3;
  trace[1] = trace[0];
  trace[1].k = 2;
  trace[1].err = 0.125;
  trace[1].psnr = 30.0;

  const std::string csv = trace_to_csv(trace);
  CHECK(csv.rfind("k,r_norm,s_norm,E,f_y,err,psnr,inner_iters\n", 0) == 0);
  CHECK(csv.find("1,0.5,0.25,1.5,2,,,3\n") != std::string::npos);
  CHECK(csv.find("2,0.5,0.25,1.5,2,0.125,30,3\n") != std::string::npos);
}

TEST_CASE("sweep csv layout") {
  SweepCell cell;
  cell.rho1 = 250.0;
  cell.rho2 = 2.5;
  cell.psnr = 31.25;
  cell.k_stop = 61;
  cell.stop_reason = StopReason::discrepancy;
  cell.wall_ms = 12.5;
  const std::string csv = sweep_to_csv({cell});
  CHECK(csv == "rho1,rho2,psnr,k_stop,stop_reason,wall_ms\n250,2.5,31.25,61,discrepancy,12.5\n");
}

TEST_CASE("summary json carries the stopping threshold and optional metrics") {
  SummaryInfo info;
  info.k_stop = 20;
  info.stop_reason = "discrepancy";
  info.rho1 = 1000.0;
  info.rho2 = 10.0;
  info.tau = 1.0001;
  info.delta = 0.256;
  info.stop_threshold = 1e6 * 1.0001 * 1.0001 * 0.256 * 0.256;
  info.final_psnr = 32.1;
  info.wall_time_ms = 5.0;
  auto j = nlohmann::json::parse(summary_to_json(info));
  CHECK(j["k_stop"] == 20);
  CHECK(j["stop_reason"] == "discrepancy");
  CHECK(j["stop_threshold"].get<double>() == doctest::Approx(info.stop_threshold));
  CHECK(j["final_psnr"].get<double>() == doctest::Approx(32.1));
  CHECK(j["final_err"].is_null());
}
