#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rugose/analysis.hpp"
#include "rugose/bogovskii.hpp"
#include "rugose/config.hpp"
#include "rugose/fit.hpp"
#include "rugose/runner.hpp"

namespace rugose {

/// Output directory precedence: cli --out, config output.dir, $RUGOSE_OUT, ".".
/// Creates the directory.
std::string resolve_output_dir(const Config& cfg, const std::string& cli_out);

struct RunOutputs {
  DiagnosticsSeries series;
  State final_state;
  std::vector<std::string> files;
};

RunOutputs run_experiment(const Config& cfg, const std::string& outdir,
                          std::ostream* log = nullptr);

struct SweepRow {
  double epsilon = 0;
  int nx = 0, nz = 0;
  double B1 = 0;            // int trace_sq_u1 dt / int grad_sq dt
  double B2 = 0;            // same for u2
  double e_budget_slack = 0;  // max_t (E + D_cum - E0) / E0
  double pressure_fn = 0;   // int_0^T int p(rho) rho^theta
  std::string status;       // "ok" or error text
};

struct SweepOutputs {
  std::vector<SweepRow> rows;  // in epsilon order
  std::optional<FitResult> fit_b1, fit_b2;  // present with >= 3 successes
  int successes = 0;
  std::vector<std::string> files;
};

/// Per-epsilon solver runs at matched per-period resolution, executed
/// concurrently (jobs workers); per-epsilon failures are recorded and the
/// sweep continues. Writes summary.csv, fit.csv and (optionally) sweep.svg.
SweepOutputs sweep_experiment(const Config& cfg, const std::string& outdir, int jobs,
                              std::ostream* log = nullptr);

struct TraceRow {
  double epsilon = 0;
  int nx = 0, nz = 0;
  double R = 0;
  double R_over_eps = 0;
  double vn_residual = 0;  // max |v.n| on the rough boundary
};

struct TraceOutputs {
  std::vector<TraceRow> rows;
  std::optional<FitResult> fit;
  double c1 = 0;  // max R/eps
  std::vector<std::string> files;
};

TraceOutputs trace_check_experiment(const Config& cfg, const std::string& outdir);

struct KornRow {
  double epsilon = 0;
  int mode = 0;
  double K = 0;
  std::string status;
};

struct KornOutputs {
  std::vector<KornRow> rows;
  double worst_ratio = 0;  // worst per-mode max/min across the epsilon list
  std::vector<std::string> files;
};

KornOutputs korn_check_experiment(const Config& cfg, const std::string& outdir,
                                  int jobs);

struct BogovskiiOutputs {
  BogovskiiSweepResult sweep;
  std::vector<std::string> files;
};

BogovskiiOutputs bogovskii_check_experiment(const Config& cfg, const std::string& outdir);

/// Prints profile statistics and the classification line, e.g.
/// `rank=1 direction=(0,1)`.
NondegeneracyResult geom_experiment(const Config& cfg, std::ostream& os);

/// Runs fn(0..n-1) on up to `jobs` worker threads; exceptions inside fn must
/// be handled by fn itself.
void parallel_for_indexed(int jobs, int n, const std::function<void(int)>& fn);

}  // namespace rugose
