#include "rugose/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <thread>

#include "rugose/csv.hpp"
#include "rugose/io.hpp"
#include "rugose/svg.hpp"

namespace rugose {

namespace fs = std::filesystem;

std::string resolve_output_dir(const Config& cfg, const std::string& cli_out) {
  std::string dir = cli_out;
  if (dir.empty()) dir = cfg.output.dir;
  if (dir.empty()) {
    if (const char* env = std::getenv("RUGOSE_OUT")) dir = env;
  }
  if (dir.empty()) dir = ".";
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create output directory " + dir);
  return dir;
}

void parallel_for_indexed(int jobs, int n, const std::function<void(int)>& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int w = 0; w < jobs; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {

int matched_nx(const Config& cfg, double eps) {
  return static_cast<int>(std::lround(cfg.grid.cells_per_period / eps));
}

MappedGrid make_run_grid(const Config& cfg, double eps) {
  const DomainSpec spec = make_domain_spec(cfg.profile, eps);
  return build_grid(spec, matched_nx(cfg, eps), cfg.grid.nz);
}

double trapezoid(const DiagnosticsSeries& s, double DiagnosticsRecord::* field) {
  double acc = 0;
  for (size_t j = 1; j < s.records.size(); ++j)
    acc += 0.5 * (s.records[j - 1].*field + s.records[j].*field) *
           (s.records[j].t - s.records[j - 1].t);
  return acc;
}

SweepRow aggregate_run(const DiagnosticsSeries& s) {
  SweepRow row;
  if (s.records.empty()) {
    row.status = "empty series (t_end = 0)";
    return row;
  }
  const double it1 = trapezoid(s, &DiagnosticsRecord::trace_sq_u1);
  const double it2 = trapezoid(s, &DiagnosticsRecord::trace_sq_u2);
  const double ig = trapezoid(s, &DiagnosticsRecord::grad_sq);
  row.B1 = (ig > 0) ? it1 / ig : 0.0;
  row.B2 = (ig > 0) ? it2 / ig : 0.0;
  const double e0 = s.records.front().E;
  double slack = 0;
  for (const auto& r : s.records) {
    const double excess = r.E + r.D_cum - e0;
    slack = std::max(slack, (e0 > 0) ? excess / e0 : excess);
  }
  row.e_budget_slack = slack;
  row.pressure_fn = trapezoid(s, &DiagnosticsRecord::pressure_fn);
  return row;
}

std::optional<FitResult> fit_rows(const std::vector<SweepRow>& rows,
                                  double SweepRow::* field) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : rows)
    if (r.status == "ok" && r.*field > 0) pts.emplace_back(r.epsilon, r.*field);
  if (pts.size() < 3) return std::nullopt;
  return fit_loglog(pts);
}

}  // namespace

RunOutputs run_experiment(const Config& cfg, const std::string& outdir,
                          std::ostream* log) {
  const double eps = *cfg.epsilon;
  const MappedGrid grid = make_run_grid(cfg, eps);
  RunConfig rc{*cfg.fluid, *cfg.ic, cfg.time.t_end, cfg.time.cfl, cfg.time.records,
               log, nullptr};

  RunOutputs out;
  if (cfg.output.snapshots) {
    const std::string p0 = outdir + "/snapshot_initial.bin";
    rc.on_record = [p0, &grid, first = true](const State& s) mutable {
      if (first) {
        write_snapshot(p0, grid, s);
        first = false;
      }
    };
    out.files.push_back(p0);
  }
  RunResult rr = run(grid, rc);
  out.series = std::move(rr.series);
  out.final_state = std::move(rr.final_state);

  const std::string series_path = outdir + "/series.csv";
  write_series_csv(series_path, out.series);
  out.files.push_back(series_path);
  if (cfg.output.snapshots) {
    const std::string pf = outdir + "/snapshot_final.bin";
    write_snapshot(pf, grid, out.final_state);
    out.files.push_back(pf);
  }
  if (cfg.output.svg && !out.series.records.empty()) {
    std::vector<std::vector<std::pair<double, double>>> curves(2);
    for (const auto& r : out.series.records) {
      curves[0].emplace_back(r.t, r.E);
      curves[1].emplace_back(r.t, r.E + r.D_cum);
    }
    SvgAxes ax{"energy budget", "t", "E", false, 640, 480};
    const std::string p = outdir + "/energy.svg";
    write_text_file(p, svg_lines(curves, {"E", "E + D_cum"}, ax));
    out.files.push_back(p);

    std::vector<std::vector<std::pair<double, double>>> tc(3);
    for (const auto& r : out.series.records) {
      tc[0].emplace_back(r.t, r.trace_sq_u1);
      tc[1].emplace_back(r.t, r.trace_sq_u2);
      tc[2].emplace_back(r.t, r.trace_sq_u3);
    }
    SvgAxes ax2{"traces on z=1", "t", "int |u_i|^2", false, 640, 480};
    const std::string p2 = outdir + "/traces.svg";
    write_text_file(p2, svg_lines(tc, {"u1", "u2", "u3"}, ax2));
    out.files.push_back(p2);
  }
  return out;
}

SweepOutputs sweep_experiment(const Config& cfg, const std::string& outdir, int jobs,
                              std::ostream* log) {
  const int n = static_cast<int>(cfg.epsilons.size());
  SweepOutputs out;
  out.rows.resize(n);

  parallel_for_indexed(jobs, n, [&](int j) {
    SweepRow& row = out.rows[j];
    row.epsilon = cfg.epsilons[j];
    try {
      const MappedGrid grid = make_run_grid(cfg, row.epsilon);
      row.nx = grid.nx();
      row.nz = grid.nz();
      RunConfig rc{*cfg.fluid, *cfg.ic, cfg.time.t_end, cfg.time.cfl, cfg.time.records,
                   nullptr, nullptr};
      const RunResult rr = run(grid, rc);
      SweepRow agg = aggregate_run(rr.series);
      agg.epsilon = row.epsilon;
      agg.nx = row.nx;
      agg.nz = row.nz;
      if (agg.status.empty()) agg.status = "ok";
      row = agg;
    } catch (const Error& e) {
      row.status = e.what();
    }
  });

  for (const auto& r : out.rows)
    if (r.status == "ok") ++out.successes;
  out.fit_b1 = fit_rows(out.rows, &SweepRow::B1);
  out.fit_b2 = fit_rows(out.rows, &SweepRow::B2);
  if (log && out.successes < 3)
    *log << "sweep: only " << out.successes << " successful runs; no fit computed\n";

  std::string csv = "epsilon,nx,nz,B1,B2,e_budget_slack,pressure_fn,status\n";
  for (const auto& r : out.rows)
    csv += csv_row({csv_num(r.epsilon), csv_num(r.nx), csv_num(r.nz), csv_num(r.B1),
                    csv_num(r.B2), csv_num(r.e_budget_slack), csv_num(r.pressure_fn),
                    csv_field(r.status)});
  const std::string summary_path = outdir + "/summary.csv";
  write_text_file(summary_path, csv);
  out.files.push_back(summary_path);

  std::string fitcsv = "series,slope,intercept,r_squared\n";
  if (out.fit_b1)
    fitcsv += csv_row({"B1", csv_num(out.fit_b1->slope), csv_num(out.fit_b1->intercept),
                       csv_num(out.fit_b1->r_squared)});
  if (out.fit_b2)
    fitcsv += csv_row({"B2", csv_num(out.fit_b2->slope), csv_num(out.fit_b2->intercept),
                       csv_num(out.fit_b2->r_squared)});
  const std::string fit_path = outdir + "/fit.csv";
  write_text_file(fit_path, fitcsv);
  out.files.push_back(fit_path);

  if (cfg.output.svg) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& r : out.rows)
      if (r.status == "ok" && r.B1 > 0) pts.emplace_back(r.epsilon, r.B1);
    if (!pts.empty()) {
      SvgAxes ax{"trace/gradient ratio B1 vs epsilon", "epsilon", "B1", true, 640, 480};
      const std::string p = outdir + "/sweep.svg";
      write_text_file(p, svg_scatter(pts, out.fit_b1 ? &*out.fit_b1 : nullptr, ax));
      out.files.push_back(p);
    }
  }
  return out;
}

TraceOutputs trace_check_experiment(const Config& cfg, const std::string& outdir) {
  TraceOutputs out;
  for (double eps : cfg.epsilons) {
    const DomainSpec spec = make_domain_spec(cfg.profile, eps);
    const int nx = matched_nx(cfg, eps);
    // square cells: the synthetic field's eps-layer needs matched vertical
    // resolution or discretization error masquerades as eps-scaling
    const MappedGrid grid = build_grid(spec, nx, std::max(cfg.grid.nz, nx));
    const Velocity v = synthetic_slip_field(grid, cfg.trace.mode);
    const RatioResult r = trace_ratio(grid, v);
    TraceRow row;
    row.epsilon = eps;
    row.nx = grid.nx();
    row.nz = grid.nz();
    row.R = r.unbounded ? std::numeric_limits<double>::infinity() : r.value;
    row.R_over_eps = row.R / eps;
    row.vn_residual = synthetic_slip_normal_residual(grid, cfg.trace.mode);
    out.rows.push_back(row);
    out.c1 = std::max(out.c1, row.R_over_eps);
  }
  std::vector<std::pair<double, double>> pts;
  for (const auto& r : out.rows)
    if (std::isfinite(r.R) && r.R > 0) pts.emplace_back(r.epsilon, r.R);
  if (pts.size() >= 3) out.fit = fit_loglog(pts);

  std::string csv = "epsilon,nx,nz,R,R_over_eps,vn_residual\n";
  for (const auto& r : out.rows)
    csv += csv_row({csv_num(r.epsilon), csv_num(r.nx), csv_num(r.nz), csv_num(r.R),
                    csv_num(r.R_over_eps), csv_num(r.vn_residual)});
  const std::string path = outdir + "/trace.csv";
  write_text_file(path, csv);
  out.files.push_back(path);

  std::string fitcsv = "series,slope,intercept,r_squared\n";
  if (out.fit)
    fitcsv += csv_row({"R", csv_num(out.fit->slope), csv_num(out.fit->intercept),
                       csv_num(out.fit->r_squared)});
  const std::string fit_path = outdir + "/fit.csv";
  write_text_file(fit_path, fitcsv);
  out.files.push_back(fit_path);

  if (cfg.output.svg && !pts.empty()) {
    SvgAxes ax{"trace ratio R vs epsilon", "epsilon", "R", true, 640, 480};
    const std::string p = outdir + "/trace.svg";
    write_text_file(p, svg_scatter(pts, out.fit ? &*out.fit : nullptr, ax));
    out.files.push_back(p);
  }
  return out;
}

KornOutputs korn_check_experiment(const Config& cfg, const std::string& outdir,
                                  int jobs) {
  const int n = static_cast<int>(cfg.epsilons.size());
  const int nmodes = static_cast<int>(cfg.korn.modes.size());
  KornOutputs out;
  out.rows.resize(static_cast<size_t>(n) * nmodes);

  parallel_for_indexed(jobs, n, [&](int j) {
    const double eps = cfg.epsilons[j];
    try {
      // density snapshot from a short solver run at the configured nz
      const MappedGrid sgrid = make_run_grid(cfg, eps);
      RunConfig rc{*cfg.fluid, *cfg.ic, cfg.korn.t_snapshot, cfg.time.cfl, 1, nullptr,
                   nullptr};
      const RunResult rr = run(sgrid, rc);

      // square grid for the synthetic fields; interpolate rho per column
      const int nx = sgrid.nx();
      const MappedGrid kgrid =
          build_grid(make_domain_spec(cfg.profile, eps), nx, std::max(cfg.grid.nz, nx));
      Field r(kgrid.nx(), kgrid.nz());
      const int nzs = sgrid.nz();
      for (int i = 0; i < kgrid.nx(); ++i) {
        for (int k = 0; k < kgrid.nz(); ++k) {
          const double t = kgrid.sigma_center(k) * nzs - 0.5;
          const int k0 = std::clamp(static_cast<int>(std::floor(t)), 0, nzs - 2);
          const double u = std::clamp(t - k0, 0.0, 1.0);
          r(i, k) = (1.0 - u) * rr.final_state.rho(i, k0) + u * rr.final_state.rho(i, k0 + 1);
        }
      }
      KornBounds bounds{cfg.korn.m, cfg.korn.M, cfg.korn.nu};
      for (int mi = 0; mi < nmodes; ++mi) {
        KornRow& row = out.rows[j * nmodes + mi];
        row.epsilon = eps;
        row.mode = cfg.korn.modes[mi];
        const Velocity v = synthetic_slip_field(kgrid, row.mode);
        row.K = korn_ratio(kgrid, v, r, *cfg.fluid, bounds);
        row.status = "ok";
      }
    } catch (const Error& e) {
      for (int mi = 0; mi < nmodes; ++mi) {
        KornRow& row = out.rows[j * nmodes + mi];
        row.epsilon = eps;
        row.mode = cfg.korn.modes[mi];
        row.status = e.what();
      }
    }
  });

  for (int mi = 0; mi < nmodes; ++mi) {
    double lo = 0, hi = 0;
    for (int j = 0; j < n; ++j) {
      const KornRow& row = out.rows[j * nmodes + mi];
      if (row.status != "ok" || !(row.K > 0)) continue;
      if (lo == 0 || row.K < lo) lo = row.K;
      hi = std::max(hi, row.K);
    }
    if (lo > 0) out.worst_ratio = std::max(out.worst_ratio, hi / lo);
  }

  std::string csv = "epsilon,mode,K,status\n";
  for (const auto& r : out.rows)
    csv += csv_row({csv_num(r.epsilon), csv_num(r.mode), csv_num(r.K),
                    csv_field(r.status)});
  const std::string path = outdir + "/korn.csv";
  write_text_file(path, csv);
  out.files.push_back(path);
  return out;
}

BogovskiiOutputs bogovskii_check_experiment(const Config& cfg, const std::string& outdir) {
  BogovskiiSweepOptions opts;
  opts.cells_per_period = cfg.grid.cells_per_period;
  opts.nz = cfg.grid.nz;
  opts.rel_tolerance = cfg.bogovskii.tolerance;
  opts.max_iterations = cfg.bogovskii.max_iterations;

  BogovskiiOutputs out;
  out.sweep = bogovskii_norm_sweep(cfg.profile, cfg.epsilons, opts);

  std::string csv = "epsilon,g_id,norm_ratio,iterations,residual\n";
  for (const auto& r : out.sweep.rows)
    csv += csv_row({csv_num(r.epsilon), csv_num(r.g_id), csv_num(r.norm_ratio),
                    csv_num(r.iterations), csv_num(r.residual)});
  const std::string path = outdir + "/bogovskii.csv";
  write_text_file(path, csv);
  out.files.push_back(path);
  return out;
}

NondegeneracyResult geom_experiment(const Config& cfg, std::ostream& os) {
  const RoughProfile& p = cfg.profile;
  const RugosityMoments m = rugosity_moments(p, 256);
  const NondegeneracyResult r = nondegeneracy_check(p);
  char buf[256];
  std::snprintf(buf, sizeof(buf), "L=%g sup=%g min=%g\n", p.lipschitz(), p.sup_value(),
                p.min_value());
  os << buf;
  std::snprintf(buf, sizeof(buf), "mean_gradient=(%g,%g)\n", m.mean.x, m.mean.y);
  os << buf;
  std::snprintf(buf, sizeof(buf), "second_moment=[[%g,%g],[%g,%g]]\n", m.m11, m.m12,
                m.m12, m.m22);
  os << buf;
  switch (r.kind) {
    case Nondegeneracy::Constant:
      os << "rank=0\n";
      break;
    case Nondegeneracy::DegenerateDirection:
      std::snprintf(buf, sizeof(buf), "rank=1 direction=(%g,%g)\n", r.direction.x,
                    r.direction.y);
      os << buf;
      break;
    case Nondegeneracy::NonDegenerate:
      os << "rank=2\n";
      break;
  }
  return r;
}

}  // namespace rugose
