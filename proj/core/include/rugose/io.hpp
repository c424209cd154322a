#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rugose/analysis.hpp"
#include "rugose/grid.hpp"
#include "rugose/solver.hpp"

namespace rugose {

/// Cell-centered field as CSV with header i,k,x,z,value.
void write_field_csv(const std::string& path, const MappedGrid& grid, const Field& f);

/// 32-byte snapshot descriptor followed by row-major (i-major, k inner)
/// float64 blocks for rho, m1, m2, m3.
struct SnapshotHeader {
  uint32_t magic = 0x52475342;  // "BSGR" little-endian on disk
  uint16_t version = 1;
  uint16_t kind = 0;  // ProfileKind
  uint32_t nx = 0;
  uint32_t nz = 0;
  double epsilon = 0;
  double time = 0;
};

void write_snapshot(const std::string& path, const MappedGrid& grid, const State& state);

struct Snapshot {
  SnapshotHeader header;
  std::vector<double> rho, m1, m2, m3;  // nx*nz each, row-major
};

Snapshot read_snapshot(const std::string& path);

/// Diagnostics time series; fixed header
/// t,E,D_cum,D_paper_cum,mass,trace1,trace2,trace3,grad_sq,pressure_fn
std::string series_to_csv(const DiagnosticsSeries& series);
void write_series_csv(const std::string& path, const DiagnosticsSeries& series);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace rugose
