#pragma once

#include <functional>
#include <iosfwd>

#include "rugose/analysis.hpp"
#include "rugose/solver.hpp"

namespace rugose {

struct RunConfig {
  FluidParams params;
  InitialCondition ic;
  double t_end = 1.0;
  double cfl = 0.4;
  int records = 200;               // diagnostics cadence: records evenly spaced in time
  std::ostream* log = nullptr;     // progress lines `t=.. dt=.. mass=.. E=..`
  std::function<void(const State&)> on_record;  // optional snapshot hook
};

struct RunResult {
  DiagnosticsSeries series;
  State final_state;
};

/// Time loop: dt <- cfl_dt (clipped to the next record time), Heun step,
/// diagnostics at each record time. t_end = 0 returns an empty series and the
/// initial state. Step failures propagate with the failing time attached.
RunResult run(const MappedGrid& grid, const RunConfig& config);

}  // namespace rugose
