#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rugose/cli.hpp"
#include "rugose/config.hpp"
#include "rugose/csv.hpp"
#include "rugose/experiments.hpp"
#include "rugose/fit.hpp"
#include "rugose/io.hpp"
#include "rugose/svg.hpp"
#include "support/test_harness.hpp"

using namespace rugose;
using testutil::record;
using testutil::record_near;

namespace fs = std::filesystem;

namespace {

int count_substr(const std::string& text, const std::string& needle) {
  int n = 0;
  for (size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++n;
  return n;
}

std::string tmpdir() {
  static const std::string d = [] {
    std::string dir = (fs::temp_directory_path() / "rugose_test").string();
    fs::create_directories(dir);
    return dir;
  }();
  return d;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path);
  os << text;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// capture std::cout during a callback
template <class F>
std::string capture_stdout(F&& f) {
  std::stringstream ss;
  std::streambuf* old = std::cout.rdbuf(ss.rdbuf());
  f();
  std::cout.rdbuf(old);
  return ss.str();
}

}  // namespace

static void test_fit_loglog() {
  {
    const std::vector<std::pair<double, double>> pts = {{1, 1}, {2, 2}, {4, 4}};
    const FitResult f = fit_loglog(pts);
    record_near("exact power law slope 1", f.slope, 1.0, 1e-12);
    record_near("exact power law R^2 = 1", f.r_squared, 1.0, 1e-12);
  }
  {
    const std::vector<std::pair<double, double>> pts = {{1, 1}, {0.5, 0.25}, {0.25, 1.0 / 16}};
    record_near("slope 2 law", fit_loglog(pts).slope, 2.0, 1e-12);
  }
  {
    // y = 3 x^0.5 with 1% multiplicative noise
    testutil::Rng rng(42);
    std::vector<std::pair<double, double>> pts;
    for (int j = 0; j < 8; ++j) {
      const double x = std::pow(2.0, -j);
      pts.emplace_back(x, 3.0 * std::sqrt(x) * (1.0 + 0.01 * (2 * rng.uniform() - 1)));
    }
    const FitResult f = fit_loglog(pts);
    record("noisy sqrt law: slope in [0.45, 0.55]", f.slope > 0.45 && f.slope < 0.55);
  }
  bool threw = false;
  try {
    const std::vector<std::pair<double, double>> pts = {{1, 1}, {2, 2}};
    (void)fit_loglog(pts);
  } catch (const Error& e) {
    threw = (e.code() == Errc::NonPositiveData);
  }
  record("fewer than 3 points rejected", threw);
  threw = false;
  try {
    const std::vector<std::pair<double, double>> pts = {{1, 1}, {2, -2}, {4, 4}};
    (void)fit_loglog(pts);
  } catch (const Error& e) {
    threw = (e.code() == Errc::NonPositiveData);
  }
  record("non-positive data rejected", threw);
}

static void test_csv() {
  record("plain field untouched", csv_field("abc1.5") == "abc1.5");
  record("comma field quoted", csv_field("a,b") == "\"a,b\"");
  record("quote doubled", csv_field("a\"b") == "\"a\"\"b\"");
  record("row join", csv_row({"1", "2"}) == "1,2\n");
  record("round-trippable double", csv_num(0.1) == "0.10000000000000001");
}

static void test_svg() {
  const std::vector<std::pair<double, double>> pts = {{1, 1}, {0.5, 0.5}, {0.25, 0.25}};
  const FitResult f = fit_loglog(pts);
  SvgAxes ax{"power law", "epsilon", "R", true, 640, 480};
  const std::string svg = svg_scatter(pts, &f, ax);
  record("scatter has exactly 3 markers", count_substr(svg, "<circle") == 3);
  record("scatter has exactly 1 fitted line path", count_substr(svg, "<path") == 1);
  record("axes labeled from the spec strings",
         svg.find("epsilon") != std::string::npos && svg.find("power law") != std::string::npos);
  const std::string svg2 = svg_scatter(pts, &f, ax);
  record("deterministic: two invocations byte-identical", svg == svg2);

  bool threw = false;
  try {
    (void)svg_scatter({}, nullptr, ax);
  } catch (const Error& e) {
    threw = (e.code() == Errc::EmptySeries);
  }
  record("empty series rejected", threw);

  const std::vector<std::vector<std::pair<double, double>>> curves = {
      {{0, 0}, {1, 1}, {2, 0.5}}};
  const std::string lines = svg_lines(curves, {"E"}, {"t", "t", "E", false, 640, 480});
  record("line chart emits a polyline", count_substr(lines, "<polyline") == 1);
}

static void test_snapshot_roundtrip() {
  const auto g = build_grid(
      make_domain_spec(make_profile(ProfileKind::Riblet, 1, .5, 0), 0.25), 64, 16);
  State s = init_state(g, Shear{1.0, 0.7, 0.3});
  s.t = 0.625;
  const std::string path = tmpdir() + "/snap.bin";
  write_snapshot(path, g, s);
  const Snapshot back = read_snapshot(path);
  record("snapshot header fields",
         back.header.nx == 64 && back.header.nz == 16 && back.header.epsilon == 0.25 &&
             back.header.time == 0.625 &&
             back.header.kind == static_cast<uint16_t>(ProfileKind::Riblet));
  double worst = 0;
  for (int i = 0; i < 64; ++i)
    for (int k = 0; k < 16; ++k) {
      worst = std::max(worst, std::abs(back.rho[i * 16 + k] - s.rho(i, k)));
      worst = std::max(worst, std::abs(back.m1[i * 16 + k] - s.m1(i, k)));
      worst = std::max(worst, std::abs(back.m2[i * 16 + k] - s.m2(i, k)));
      worst = std::max(worst, std::abs(back.m3[i * 16 + k] - s.m3(i, k)));
    }
  record("snapshot round-trip bitwise", worst == 0.0);

  const std::string csvp = tmpdir() + "/field.csv";
  write_field_csv(csvp, g, s.rho);
  const std::string text = slurp(csvp);
  record("field csv header", text.rfind("i,k,x,z,value\n", 0) == 0);
}

static const char* kSweepConfig = R"JSON({
  "experiment": "sweep",
  "profile": {"kind": "riblet", "c0": 1.0, "c1": 0.5},
  "epsilons": [0.25, 0.125],
  "grid": {"cells_per_period": 16, "nz": 16},
  "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.001, "eta": 0.0},
  "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 1.0},
  "time": {"t_end": 0.05, "cfl": 0.4, "records": 10},
  "output": {"svg": true}
})JSON";

static void test_config() {
  const Config cfg = parse_config(kSweepConfig);
  record("config parses", cfg.experiment == ExperimentKind::Sweep &&
                              cfg.epsilons.size() == 2 && cfg.fluid.has_value());
  auto expect_reject = [](const std::string& text, const std::string& label) {
    bool threw = false;
    try {
      (void)parse_config(text);
    } catch (const Error& e) {
      threw = (e.code() == Errc::ConfigError);
    }
    record(label, threw);
  };
  expect_reject(R"({"profile": {"kind": "flat", "c0": 1}, "bogus": 1})",
                "unknown root key rejected");
  expect_reject(R"({"profile": {"kind": "flat", "c0": 1, "zz": 2}})",
                "unknown nested key rejected");
  expect_reject(R"({"epsilon": 0.5})", "missing profile rejected");
  expect_reject(R"({"profile": {"kind": "flat", "c0": 1}, "epsilon": 0.3})",
                "non-reciprocal epsilon rejected");
  expect_reject(R"({"profile": {"kind": "flat", "c0": 1}, "epsilons": [0.125, 0.25]})",
                "non-decreasing epsilons rejected");
  expect_reject(R"({"profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.7, "c2": 0.5}})",
                "non-positive profile rejected at parse");

  bool threw = false;
  try {
    validate_for(cfg, ExperimentKind::Run);
  } catch (const Error& e) {
    threw = (e.code() == Errc::ConfigError);
  }
  record("experiment-kind mismatch rejected", threw);
}

static void test_cli() {
  const std::string dir = tmpdir();
  // geom: riblet classification line
  const std::string geom_cfg = dir + "/geom.json";
  write_file(geom_cfg, R"({"profile": {"kind": "riblet", "c0": 1.0, "c1": 0.5}})");
  int rc = -1;
  const std::string out =
      capture_stdout([&] { rc = cli({"geom", "--config", geom_cfg}); });
  record("geom exits 0", rc == 0);
  record("geom prints `rank=1 direction=(0,1)`",
         out.find("rank=1 direction=(0,1)") != std::string::npos);

  record("missing config file exits 2",
         cli({"geom", "--config", dir + "/nope.json"}) == 2);
  record("bad config exits 2", [&] {
    const std::string bad = dir + "/bad.json";
    write_file(bad, "{nonsense");
    int r = -1;
    capture_stdout([&] { r = cli({"geom", "--config", bad}); });
    return r == 2;
  }());

  // tiny run writes series.csv
  const std::string run_cfg = dir + "/run.json";
  write_file(run_cfg, R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilon": 0.25,
    "grid": {"cells_per_period": 16, "nz": 16},
    "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.01, "eta": 0.0},
    "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 0.0},
    "time": {"t_end": 0.02, "cfl": 0.4, "records": 4},
    "output": {"snapshots": true}
  })JSON");
  const std::string run_out = dir + "/run_out";
  std::string log;
  log = capture_stdout([&] { rc = cli({"run", "--config", run_cfg, "--out", run_out}); });
  record("run exits 0", rc == 0);
  record("run writes series.csv", fs::exists(run_out + "/series.csv"));
  record("run writes snapshots", fs::exists(run_out + "/snapshot_final.bin"));
  record("run logs t=/dt=/mass=/E= lines",
         log.find("t=") != std::string::npos && log.find("mass=") != std::string::npos);
  const std::string series = slurp(run_out + "/series.csv");
  record("series csv fixed header",
         series.rfind("t,E,D_cum,D_paper_cum,mass,trace1,trace2,trace3,grad_sq,pressure_fn\n",
                      0) == 0);

  // sweep determinism across --jobs
  const std::string sweep_cfg = dir + "/sweep.json";
  write_file(sweep_cfg, kSweepConfig);
  const std::string o1 = dir + "/sweep1", o2 = dir + "/sweep2";
  capture_stdout([&] { rc = cli({"sweep", "--config", sweep_cfg, "--out", o1, "--jobs", "1"}); });
  record("sweep exits 0", rc == 0);
  capture_stdout([&] { rc = cli({"sweep", "--config", sweep_cfg, "--out", o2, "--jobs", "4"}); });
  record("sweep with 4 jobs exits 0", rc == 0);
  record("summary.csv written with one row per epsilon",
         count_substr(slurp(o1 + "/summary.csv"), "\n") == 3);
  record("byte-identical outputs across --jobs",
         slurp(o1 + "/summary.csv") == slurp(o2 + "/summary.csv") &&
             slurp(o1 + "/fit.csv") == slurp(o2 + "/fit.csv"));

  // plot from the produced summary
  capture_stdout([&] {
    rc = cli({"plot", o1 + "/summary.csv", "--x", "epsilon", "--y", "B1", "--loglog",
              "--out", dir});
  });
  record("plot exits 0 and writes plot.svg", rc == 0 && fs::exists(dir + "/plot.svg"));

  // trace-check smoke through the CLI
  const std::string trace_cfg = dir + "/trace.json";
  write_file(trace_cfg, R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilons": [0.25, 0.125, 0.0625],
    "grid": {"cells_per_period": 16, "nz": 16},
    "trace": {"mode": 1}
  })JSON");
  const std::string trace_out = dir + "/trace_out";
  std::string tlog;
  tlog = capture_stdout([&] { rc = cli({"trace-check", "--config", trace_cfg, "--out", trace_out}); });
  record("trace-check exits 0", rc == 0);
  record("trace-check reports slope and c1",
         tlog.find("slope=") != std::string::npos && tlog.find("c1=") != std::string::npos);
  record("trace.csv written", fs::exists(trace_out + "/trace.csv"));

  // korn-check and bogovskii-check smokes through the CLI
  const std::string korn_cfg = dir + "/korn.json";
  write_file(korn_cfg, R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilons": [0.25, 0.125],
    "grid": {"cells_per_period": 16, "nz": 16},
    "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.001, "eta": 0.0},
    "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 1.0},
    "korn": {"modes": [1], "t_snapshot": 0.02}
  })JSON");
  const std::string korn_out = dir + "/korn_out";
  capture_stdout([&] { rc = cli({"korn-check", "--config", korn_cfg, "--out", korn_out, "--jobs", "2"}); });
  record("korn-check exits 0 and writes korn.csv",
         rc == 0 && fs::exists(korn_out + "/korn.csv"));

  const std::string bog_cfg = dir + "/bog.json";
  write_file(bog_cfg, R"JSON({
    "profile": {"kind": "riblet", "c0": 1.0, "c1": 0.5},
    "epsilons": [0.5, 0.25],
    "grid": {"cells_per_period": 16, "nz": 16},
    "bogovskii": {"tolerance": 1e-5, "max_iterations": 600}
  })JSON");
  const std::string bog_out = dir + "/bog_out";
  capture_stdout([&] { rc = cli({"bogovskii-check", "--config", bog_cfg, "--out", bog_out}); });
  record("bogovskii-check exits 0 and writes bogovskii.csv",
         rc == 0 && fs::exists(bog_out + "/bogovskii.csv"));
  record("bogovskii.csv has the fixed header",
         slurp(bog_out + "/bogovskii.csv")
                 .rfind("epsilon,g_id,norm_ratio,iterations,residual\n", 0) == 0);

  // RUGOSE_OUT fallback
  const std::string env_out = dir + "/env_out";
  setenv("RUGOSE_OUT", env_out.c_str(), 1);
  capture_stdout([&] { rc = cli({"run", "--config", run_cfg}); });
  unsetenv("RUGOSE_OUT");
  record("RUGOSE_OUT used as default output directory",
         rc == 0 && fs::exists(env_out + "/series.csv"));
}

int main() {
  test_fit_loglog();
  test_csv();
  test_svg();
  test_snapshot_roundtrip();
  test_config();
  test_cli();
  return testutil::summary("test_tools");
}
