#include "rugose/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace rugose {

namespace {

void log_line(std::ostream* os, double t, double dt, double mass, double e) {
  if (!os) return;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "t=%g dt=%g mass=%g E=%g\n", t, dt, mass, e);
  *os << buf;
}

}  // namespace

RunResult run(const MappedGrid& grid, const RunConfig& config) {
  if (!(config.t_end >= 0)) throw Error(Errc::InvalidArgument, "t_end must be >= 0");
  if (config.records < 1) throw Error(Errc::InvalidArgument, "records must be >= 1");

  RunResult out;
  out.final_state = init_state(grid, config.ic);
  if (config.on_record) config.on_record(out.final_state);
  if (config.t_end == 0.0) return out;

  State& s = out.final_state;
  StepScratch scratch;

  DiagnosticsRecord rec = record(grid, config.params, s, nullptr);
  out.series.records.push_back(rec);
  log_line(config.log, s.t, 0.0, rec.mass, rec.E);

  const double rdt = config.t_end / config.records;
  double last_dt = 0;
  for (int j = 1; j <= config.records; ++j) {
    const double target = (j == config.records) ? config.t_end : j * rdt;
    while (s.t < target - 1e-14 * config.t_end) {
      double dt = cfl_dt(grid, config.params, s, config.cfl);
      dt = std::min(dt, target - s.t);
      step(grid, config.params, s, dt, scratch);
      last_dt = dt;
    }
    s.t = target;  // suppress round-off creep in the recorded times
    rec = record(grid, config.params, s, &out.series.records.back());
    out.series.records.push_back(rec);
    log_line(config.log, s.t, last_dt, rec.mass, rec.E);
    if (config.on_record) config.on_record(s);
  }
  return out;
}

}  // namespace rugose
