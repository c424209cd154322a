#include "rugose/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rugose/csv.hpp"
#include "rugose/experiments.hpp"
#include "rugose/io.hpp"
#include "rugose/svg.hpp"

namespace rugose {

namespace {

struct CommonArgs {
  std::string config;
  std::string out;
  int jobs = 1;
  uint64_t seed = 0;
};

void add_common(CLI::App* sub, CommonArgs* c, bool needs_config = true) {
  auto* opt = sub->add_option("--config", c->config, "JSON config file");
  if (needs_config) opt->required();
  sub->add_option("--out", c->out, "output directory (default: config, $RUGOSE_OUT, .)");
  sub->add_option("--jobs", c->jobs, "worker threads for sweeps")->check(CLI::Range(1, 256));
  sub->add_option("--seed", c->seed, "seed recorded with the experiment");
}

Config load_for(const CommonArgs& c, ExperimentKind kind) {
  Config cfg = load_config(c.config);
  if (c.seed != 0) cfg.seed = c.seed;
  validate_for(cfg, kind);
  return cfg;
}

// minimal RFC-4180 reader for the plot subcommand
std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error(Errc::ConfigError, "cannot open CSV file: " + path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t j = 0; j < line.size(); ++j) {
      const char ch = line[j];
      if (quoted) {
        if (ch == '"' && j + 1 < line.size() && line[j + 1] == '"') {
          cur.push_back('"');
          ++j;
        } else if (ch == '"') {
          quoted = false;
        } else {
          cur.push_back(ch);
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(cur);
        cur.clear();
      } else {
        cur.push_back(ch);
      }
    }
    fields.push_back(cur);
    rows.push_back(std::move(fields));
  }
  return rows;
}

int do_plot(const std::string& csv_path, const std::string& xcol, const std::string& ycol,
            bool loglog, bool with_fit, const std::string& out) {
  const auto rows = read_csv(csv_path);
  if (rows.size() < 2) throw Error(Errc::EmptySeries, "CSV has no data rows");
  int xi = -1, yi = -1;
  for (size_t j = 0; j < rows[0].size(); ++j) {
    if (rows[0][j] == xcol) xi = static_cast<int>(j);
    if (rows[0][j] == ycol) yi = static_cast<int>(j);
  }
  if (xi < 0 || yi < 0)
    throw Error(Errc::ConfigError, "column not found (have header row?): " + xcol + "/" + ycol);
  std::vector<std::pair<double, double>> pts;
  for (size_t r = 1; r < rows.size(); ++r) {
    if (static_cast<int>(rows[r].size()) <= std::max(xi, yi)) continue;
    try {
      pts.emplace_back(std::stod(rows[r][xi]), std::stod(rows[r][yi]));
    } catch (const std::exception&) {
      // skip non-numeric rows
    }
  }
  FitResult fit;
  bool have_fit = false;
  if (with_fit && pts.size() >= 3) {
    fit = fit_loglog(pts);
    have_fit = true;
  }
  SvgAxes ax{ycol + " vs " + xcol, xcol, ycol, loglog, 640, 480};
  const std::string svg = svg_scatter(pts, have_fit ? &fit : nullptr, ax);
  const std::string path = out + "/plot.svg";
  write_text_file(path, svg);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"rough-channel compressible Navier-Stokes diagnostics"};
  app.require_subcommand(1);

  CommonArgs geom_a, run_a, sweep_a, trace_a, korn_a, bog_a;
  auto* sc_geom = app.add_subcommand("geom", "profile statistics and classification");
  add_common(sc_geom, &geom_a);
  auto* sc_run = app.add_subcommand("run", "single simulation with diagnostics");
  add_common(sc_run, &run_a);
  auto* sc_sweep = app.add_subcommand("sweep", "epsilon sweep of solver runs");
  add_common(sc_sweep, &sweep_a);
  auto* sc_trace = app.add_subcommand("trace-check", "trace-inequality scaling sweep");
  add_common(sc_trace, &trace_a);
  auto* sc_korn = app.add_subcommand("korn-check", "Korn-ratio uniformity sweep");
  add_common(sc_korn, &korn_a);
  auto* sc_bog = app.add_subcommand("bogovskii-check", "Bogovskii norm sweep");
  add_common(sc_bog, &bog_a);

  std::string plot_csv, plot_x = "epsilon", plot_y = "B1", plot_out;
  bool plot_loglog = false, plot_fit = false;
  auto* sc_plot = app.add_subcommand("plot", "scatter plot from a CSV file");
  sc_plot->add_option("csv", plot_csv, "input CSV file")->required();
  sc_plot->add_option("--x", plot_x, "x column name");
  sc_plot->add_option("--y", plot_y, "y column name");
  sc_plot->add_flag("--loglog", plot_loglog, "log-log axes");
  sc_plot->add_flag("--fit", plot_fit, "draw a fitted power law");
  sc_plot->add_option("--out", plot_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (sc_geom->parsed()) {
      const Config cfg = load_for(geom_a, ExperimentKind::Geom);
      geom_experiment(cfg, std::cout);
      return 0;
    }
    if (sc_run->parsed()) {
      const Config cfg = load_for(run_a, ExperimentKind::Run);
      const std::string outdir = resolve_output_dir(cfg, run_a.out);
      const RunOutputs ro = run_experiment(cfg, outdir, &std::cout);
      for (const auto& f : ro.files) std::cout << "wrote " << f << "\n";
      return 0;
    }
    if (sc_sweep->parsed()) {
      const Config cfg = load_for(sweep_a, ExperimentKind::Sweep);
      const std::string outdir = resolve_output_dir(cfg, sweep_a.out);
      const SweepOutputs so = sweep_experiment(cfg, outdir, sweep_a.jobs, &std::cout);
      if (so.fit_b1)
        std::cout << "B1: slope=" << csv_num(so.fit_b1->slope)
                  << " r2=" << csv_num(so.fit_b1->r_squared) << "\n";
      if (so.fit_b2)
        std::cout << "B2: slope=" << csv_num(so.fit_b2->slope)
                  << " r2=" << csv_num(so.fit_b2->r_squared) << "\n";
      for (const auto& f : so.files) std::cout << "wrote " << f << "\n";
      const bool any_fail = so.successes < static_cast<int>(so.rows.size());
      return any_fail ? 3 : 0;
    }
    if (sc_trace->parsed()) {
      const Config cfg = load_for(trace_a, ExperimentKind::TraceCheck);
      const std::string outdir = resolve_output_dir(cfg, trace_a.out);
      const TraceOutputs to = trace_check_experiment(cfg, outdir);
      if (to.fit)
        std::cout << "R: slope=" << csv_num(to.fit->slope)
                  << " r2=" << csv_num(to.fit->r_squared) << "\n";
      std::cout << "c1=" << csv_num(to.c1) << "\n";
      for (const auto& f : to.files) std::cout << "wrote " << f << "\n";
      return 0;
    }
    if (sc_korn->parsed()) {
      const Config cfg = load_for(korn_a, ExperimentKind::KornCheck);
      const std::string outdir = resolve_output_dir(cfg, korn_a.out);
      const KornOutputs ko = korn_check_experiment(cfg, outdir, korn_a.jobs);
      std::cout << "korn max/min=" << csv_num(ko.worst_ratio) << "\n";
      for (const auto& f : ko.files) std::cout << "wrote " << f << "\n";
      for (const auto& r : ko.rows)
        if (r.status != "ok") return 3;
      return 0;
    }
    if (sc_bog->parsed()) {
      const Config cfg = load_for(bog_a, ExperimentKind::BogovskiiCheck);
      const std::string outdir = resolve_output_dir(cfg, bog_a.out);
      const BogovskiiOutputs bo = bogovskii_check_experiment(cfg, outdir);
      std::cout << "bogovskii max/min=" << csv_num(bo.sweep.max_over_min) << "\n";
      for (const auto& f : bo.files) std::cout << "wrote " << f << "\n";
      for (const auto& r : bo.sweep.rows)
        if (r.status != "ok") return 3;
      return 0;
    }
    if (sc_plot->parsed()) {
      std::string out = plot_out;
      if (out.empty()) {
        Config dummy;  // plot has no config; reuse the env/cwd fallback
        out = resolve_output_dir(dummy, plot_out);
      }
      return do_plot(plot_csv, plot_x, plot_y, plot_loglog, plot_fit, out);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_config_error(e.code()) ? 2 : 3;
  }
  return 2;
}

}  // namespace

int cli(int argc, const char* const* argv) { return dispatch(argc, argv); }

int cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("rugose");
  for (const auto& a : args) argv.push_back(a.c_str());
  return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace rugose
