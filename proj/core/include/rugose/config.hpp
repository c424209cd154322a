#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rugose/geometry.hpp"
#include "rugose/solver.hpp"

namespace rugose {

enum class ExperimentKind { Run, Sweep, TraceCheck, KornCheck, BogovskiiCheck, Geom };

std::string to_string(ExperimentKind k);

struct GridConfig {
  int cells_per_period = 16;
  int nz = 32;
};

struct TimeConfig {
  double t_end = 1.0;
  double cfl = 0.4;
  int records = 100;
};

struct OutputConfig {
  std::string dir;  // empty: resolved from --out / RUGOSE_OUT / "."
  bool snapshots = false;
  bool svg = true;
};

struct TraceConfig {
  int mode = 1;
};

struct KornConfig {
  std::vector<int> modes = {1, 2, 3};
  double m = 1e-9;
  double M = 1e9;
  double nu = 0;  // 0: use gamma
  double t_snapshot = 0.05;
};

struct BogovskiiConfig {
  double tolerance = 1e-7;  // relative to ||g||
  int max_iterations = 1000;
};

struct Config {
  std::optional<ExperimentKind> experiment;  // optional; CLI subcommand is authoritative
  RoughProfile profile;
  std::optional<double> epsilon;   // run
  std::vector<double> epsilons;    // sweep / checks; strictly decreasing
  GridConfig grid;
  std::optional<FluidParams> fluid;
  std::optional<InitialCondition> ic;
  TimeConfig time;
  OutputConfig output;
  TraceConfig trace;
  KornConfig korn;
  BogovskiiConfig bogovskii;
  uint64_t seed = 0;
};

/// Parses and schema-validates the JSON config; unknown keys are rejected at
/// every level. Throws Error(ConfigError) with a diagnostic message.
Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

/// Checks that the fields needed by the experiment kind are present.
void validate_for(const Config& cfg, ExperimentKind kind);

}  // namespace rugose
