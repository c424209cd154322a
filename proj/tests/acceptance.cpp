// Acceptance suite: one pass/fail line per criterion, wall-clock budgets
// included. Run via ctest or directly; exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "rugose/analysis.hpp"
#include "rugose/bogovskii.hpp"
#include "rugose/config.hpp"
#include "rugose/experiments.hpp"
#include "rugose/fit.hpp"
#include "rugose/runner.hpp"
#include "support/kkt_oracle.hpp"

using namespace rugose;

namespace {

int g_failed = 0;

double now_s() {
  using clock = std::chrono::steady_clock;
  static const auto t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Timer {
  double t0 = now_s();
  double elapsed() const { return now_s() - t0; }
};

void report(const char* id, bool ok, const std::string& detail, double seconds) {
  if (!ok) ++g_failed;
  std::printf("[%s] %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, detail.c_str(), seconds);
  std::fflush(stdout);
}

std::string outdir(const std::string& leaf) {
  const std::string d = "acceptance_out/" + leaf;
  std::filesystem::create_directories(d);
  return d;
}

MappedGrid egg_grid(double eps, int nx, int nz) {
  return build_grid(make_domain_spec(make_profile(ProfileKind::EggCarton, 1, .5, .5), eps),
                    nx, nz);
}

// ----------------------------------------------------------------------------
// C1: exact discrete equilibrium and mass conservation
// ----------------------------------------------------------------------------
void criterion1() {
  Timer timer;
  const auto g = egg_grid(0.25, 64, 32);
  const FluidParams p(1.0, 5.0 / 3.0, 0.1, 0.0);
  State s = init_state(g, UniformRest{1.0});
  const double m0 = total_mass(g, s);
  StepScratch sc;
  const double dt = cfl_dt(g, p, s, 0.4);
  for (int n = 0; n < 1000; ++n) step(g, p, s, dt, sc);
  const double umax = max_speed(g, s);
  const double drift = std::abs(total_mass(g, s) - m0) / m0;
  const double secs = timer.elapsed();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max|u|=%.3g (<=1e-13), mass drift=%.3g (<=1e-12)",
                umax, drift);
  report("C1 equilibrium+conservation", umax <= 1e-13 && drift <= 1e-12 && secs < 10.0,
         buf, secs);
}

// ----------------------------------------------------------------------------
// C2: acoustic crest speed within 2% of sqrt(a gamma rho^(gamma-1))
// ----------------------------------------------------------------------------
void criterion2() {
  Timer timer;
  const int nx = 512, nz = 16;
  const auto g = build_grid(
      make_domain_spec(make_profile(ProfileKind::Flat, 1, 0, 0), 0.5), nx, nz);
  const double a = 1.0, gamma = 2.0;
  const FluidParams p(a, gamma, 1e-12, 0.0);
  const double c0 = std::sqrt(a * gamma);

  // right-moving simple wave: u1 = c (rho - rho0)/rho0, amplitude 1e-3
  State s(nx, nz);
  for (int i = 0; i < nx; ++i) {
    const double x = g.x_center(i);
    const double bump = 1e-3 * std::exp(-std::pow((x - 0.3) / 0.04, 2));
    for (int k = 0; k < nz; ++k) {
      s.rho(i, k) = 1.0 + bump;
      s.m1(i, k) = s.rho(i, k) * c0 * bump;
    }
  }
  apply_boundary(g, s);

  // crest position at the mid row by parabolic refinement of the max
  const int kmid = nz / 2;
  auto crest = [&]() {
    int ibest = 0;
    double best = -1;
    for (int i = 0; i < nx; ++i)
      if (s.rho(i, kmid) > best) {
        best = s.rho(i, kmid);
        ibest = i;
      }
    const double ym = s.rho((ibest - 1 + nx) % nx, kmid);
    const double yp = s.rho((ibest + 1) % nx, kmid);
    const double denom = ym - 2 * best + yp;
    const double frac = (denom != 0.0) ? 0.5 * (ym - yp) / denom : 0.0;
    return g.x_center(ibest) + frac * g.dxi();
  };

  StepScratch sc;
  std::vector<std::pair<double, double>> path;  // (t, unwrapped crest x)
  double prev_x = crest(), offset = 0;
  path.emplace_back(0.0, prev_x);
  const double t_end = 0.3;
  while (s.t < t_end) {
    double dt = cfl_dt(g, p, s, 0.4);
    dt = std::min(dt, t_end - s.t);
    step(g, p, s, dt, sc);
    if (s.t > 0.05 && path.size() < 50 &&
        s.t >= 0.05 + (path.size()) * 0.005) {
      double x = crest() + offset;
      while (x < prev_x - 0.5) {
        offset += 1.0;
        x += 1.0;
      }
      prev_x = x;
      path.emplace_back(s.t, x);
    }
  }
  // least squares slope of x(t)
  double st = 0, sx = 0, stt = 0, stx = 0;
  const double n = static_cast<double>(path.size());
  for (auto [t, x] : path) {
    st += t;
    sx += x;
    stt += t * t;
    stx += t * x;
  }
  const double speed = (n * stx - st * sx) / (n * stt - st * st);
  const double rel = std::abs(speed - c0) / c0;
  const double secs = timer.elapsed();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "crest speed %.5f vs sqrt(2)=%.5f (rel err %.3f%%)",
                speed, c0, 100 * rel);
  report("C2 acoustic speed", rel <= 0.02 && secs < 30.0, buf, secs);
}

// ----------------------------------------------------------------------------
// C3: energy inequality along a decaying-shear run
// ----------------------------------------------------------------------------
void criterion3() {
  Timer timer;
  const Config cfg = parse_config(R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilon": 0.125,
    "grid": {"cells_per_period": 16, "nz": 32},
    "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.05, "eta": 0.0},
    "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 1.0},
    "time": {"t_end": 1.0, "cfl": 0.4, "records": 100},
    "output": {"svg": false}
  })JSON");
  const RunOutputs ro = run_experiment(cfg, outdir("c3"));
  const double e0 = ro.series.records.front().E;
  double worst = -1e300;
  for (const auto& r : ro.series.records)
    worst = std::max(worst, r.E + r.D_cum - e0 * (1.0 + 1e-6));
  const double secs = timer.elapsed();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max(E+D_cum) - E0(1+1e-6) = %.3g (<= 0), E0=%.4f",
                worst, e0);
  report("C3 energy inequality", worst <= 0.0 && secs < 120.0, buf, secs);
}

// ----------------------------------------------------------------------------
// C4: trace-inequality scaling of synthetic admissible fields
// ----------------------------------------------------------------------------
void criterion4() {
  Timer timer;
  const Config cfg = parse_config(R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilons": [0.25, 0.125, 0.0625, 0.03125],
    "grid": {"cells_per_period": 16, "nz": 32},
    "trace": {"mode": 1}
  })JSON");
  const TraceOutputs to = trace_check_experiment(cfg, outdir("c4"));
  const bool have_fit = to.fit.has_value();
  const double slope = have_fit ? to.fit->slope : 0.0;
  const bool ok = have_fit && slope >= 0.7 && slope <= 1.3 && std::isfinite(to.c1) &&
                  to.c1 > 0;
  const double secs = timer.elapsed();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "slope=%.3f (in [0.7,1.3]), c1=max R/eps=%.4g", slope,
                to.c1);
  report("C4 trace inequality scaling", ok && secs < 120.0, buf, secs);
}

// ----------------------------------------------------------------------------
// C5 + C8: rugosity-induced no-slip vs degenerate contrast, and the pressure
// functional uniformity measured on the same sweep
// ----------------------------------------------------------------------------
void criterion5_and_8() {
  Timer timer;
  const char* base = R"JSON({
    "profile": {"kind": "%s", "c0": 1.0, "c1": 0.5},
    "epsilons": [0.25, 0.125, 0.0625, 0.03125],
    "grid": {"cells_per_period": 16, "nz": 32},
    "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.001, "eta": 0.0},
    "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 1.0},
    "time": {"t_end": 1.0, "cfl": 0.4, "records": 100},
    "output": {"svg": true}
  })JSON";
  char rib_json[1024], flat_json[1024];
  std::snprintf(rib_json, sizeof(rib_json), base, "riblet");
  std::snprintf(flat_json, sizeof(flat_json), base, "flat");

  const SweepOutputs rib = sweep_experiment(parse_config(rib_json), outdir("c5_riblet"), 4);
  const SweepOutputs flat = sweep_experiment(parse_config(flat_json), outdir("c5_flat"), 4);

  bool all_ok = rib.successes == 4 && flat.successes == 4;
  const double b1_slope = rib.fit_b1 ? rib.fit_b1->slope : 0.0;
  const double b2_slope = rib.fit_b2 ? rib.fit_b2->slope : 99.0;
  const double flat_b1_slope = flat.fit_b1 ? flat.fit_b1->slope : 99.0;
  const SweepRow& rib_last = rib.rows.back();
  const SweepRow& flat_last = flat.rows.back();
  const double contrast = (rib_last.B2 > 0) ? rib_last.B1 / rib_last.B2 : 99.0;
  // control ordering: non-degenerate-direction decay beats the flat control
  // by at least 5x at the smallest epsilon
  const double ordering = (flat_last.B1 > 0) ? rib_last.B1 / flat_last.B1 : 99.0;

  const bool ok = all_ok && b1_slope >= 0.5 && b2_slope <= 0.2 && contrast <= 0.2 &&
                  flat_b1_slope <= 0.2 && ordering <= 0.2;
  const double secs = timer.elapsed();
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "B1 slope=%.2f (>=0.5), B2 slope=%.2f (<=0.2), B1/B2(1/32)=%.3g "
                "(<=0.2), flat B1 slope=%.2f (<=0.2), riblet/flat B1(1/32)=%.3g (<=0.2)",
                b1_slope, b2_slope, contrast, flat_b1_slope, ordering);
  report("C5 rugosity-induced no-slip", ok && secs < 1200.0, buf, secs);

  // C8 on the riblet sweep: pressure functional uniformity
  double lo = 0, hi = 0;
  for (const auto& r : rib.rows) {
    if (r.status != "ok") continue;
    if (lo == 0 || r.pressure_fn < lo) lo = r.pressure_fn;
    hi = std::max(hi, r.pressure_fn);
  }
  const double ratio = (lo > 0) ? hi / lo : 99.0;
  char buf2[128];
  std::snprintf(buf2, sizeof(buf2), "max/min = %.3f (<= 2)", ratio);
  report("C8 pressure functional uniformity", all_ok && ratio <= 2.0, buf2, 0.0);
}

// ----------------------------------------------------------------------------
// C6: Korn-ratio uniformity across the epsilon sweep
// ----------------------------------------------------------------------------
void criterion6() {
  Timer timer;
  const Config cfg = parse_config(R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilons": [0.25, 0.125, 0.0625, 0.03125],
    "grid": {"cells_per_period": 16, "nz": 32},
    "fluid": {"a": 1.0, "gamma": 1.6666666666666667, "mu": 0.001, "eta": 0.0},
    "ic": {"type": "shear", "rho0": 1.0, "u1": 1.0, "u2": 1.0},
    "time": {"cfl": 0.4},
    "korn": {"modes": [1, 2, 3], "t_snapshot": 0.05}
  })JSON");
  const KornOutputs ko = korn_check_experiment(cfg, outdir("c6"), 4);
  bool all_ok = true;
  for (const auto& r : ko.rows) all_ok = all_ok && r.status == "ok";
  const double secs = timer.elapsed();
  char buf[128];
  std::snprintf(buf, sizeof(buf), "worst per-mode max/min = %.3f (<= 2)", ko.worst_ratio);
  report("C6 Korn uniformity", all_ok && ko.worst_ratio <= 2.0 && secs < 60.0, buf, secs);
}

// ----------------------------------------------------------------------------
// C7: Bogovskii norm epsilon-independence + tiny dense-oracle match
// ----------------------------------------------------------------------------
void criterion7() {
  Timer timer;
  const Config cfg = parse_config(R"JSON({
    "profile": {"kind": "eggcarton", "c0": 1.0, "c1": 0.5, "c2": 0.5},
    "epsilons": [0.25, 0.125, 0.0625],
    "grid": {"cells_per_period": 16, "nz": 32},
    "bogovskii": {"tolerance": 1e-7, "max_iterations": 1000}
  })JSON");
  const BogovskiiOutputs bo = bogovskii_check_experiment(cfg, outdir("c7"));
  bool all_ok = true;
  for (const auto& r : bo.sweep.rows) all_ok = all_ok && r.status == "ok";

  const auto tiny = MappedGrid::unchecked(
      make_domain_spec(make_profile(ProfileKind::Flat, 1, 0, 0), 0.5), 8, 8);
  Field g8(8, 8);
  for (int i = 0; i < 8; ++i)
    for (int k = 0; k < 8; ++k)
      g8(i, k) = std::sin(2 * M_PI * tiny.x_center(i)) * std::sin(M_PI * tiny.sigma_center(k));
  const double oracle_diff = testutil::kkt_oracle_max_diff(tiny, g8, 1e-11);

  const double secs = timer.elapsed();
  char buf[160];
  std::snprintf(buf, sizeof(buf), "N(eps) max/min = %.3f (<= 1.5), KKT oracle diff %.2e (<= 1e-8)",
                bo.sweep.max_over_min, oracle_diff);
  report("C7 Bogovskii eps-independence",
         all_ok && bo.sweep.max_over_min <= 1.5 && oracle_diff <= 1e-8 && secs < 300.0,
         buf, secs);
}

// ----------------------------------------------------------------------------
// C9: classification exactness on the three analytic profiles
// ----------------------------------------------------------------------------
void criterion9() {
  Timer timer;
  const auto egg = nondegeneracy_check(make_profile(ProfileKind::EggCarton, 1, .5, .5));
  const auto rib = nondegeneracy_check(make_profile(ProfileKind::Riblet, 1, .5, 0));
  const auto flat = nondegeneracy_check(make_profile(ProfileKind::Flat, 1, 0, 0));
  const bool ok = egg.kind == Nondegeneracy::NonDegenerate &&
                  rib.kind == Nondegeneracy::DegenerateDirection &&
                  rib.direction.x == 0.0 && rib.direction.y == 1.0 &&
                  flat.kind == Nondegeneracy::Constant;
  report("C9 classification exactness", ok,
         "eggcarton=NonDegenerate riblet=DegenerateDirection(0,1) flat=Constant",
         timer.elapsed());
}

}  // namespace

int main(int argc, char** argv) {
  // optional filter: run only the named criteria, e.g. ./acceptance C4 C7
  auto want = [&](const char* id) {
    if (argc <= 1) return true;
    for (int j = 1; j < argc; ++j)
      if (std::strcmp(argv[j], id) == 0) return true;
    return false;
  };
  if (want("C1")) criterion1();
  if (want("C2")) criterion2();
  if (want("C3")) criterion3();
  if (want("C4")) criterion4();
  if (want("C5") || want("C8")) criterion5_and_8();
  if (want("C6")) criterion6();
  if (want("C7")) criterion7();
  if (want("C9")) criterion9();
  std::printf("acceptance: %s (%d criteria failed)\n", g_failed ? "FAIL" : "PASS", g_failed);
  return g_failed ? 1 : 0;
}
