#pragma once

#include <span>
#include <vector>

#include "rugose/grid.hpp"
#include "rugose/solver.hpp"

namespace rugose {

struct Velocity {
  Velocity() = default;
  Velocity(int nx, int nz) : u1(nx, nz), u2(nx, nz), u3(nx, nz) {}
  Field u1, u2, u3;
};

/// u = m / rho on the interior.
Velocity velocity_from(const MappedGrid& grid, const State& state);

/// Total energy E = int ( 1/2 rho |u|^2 + P(rho) ) with the pressure
/// potential P(rho) = a (rho^gamma - rho) / (gamma - 1); P(1) = 0.
double energy(const MappedGrid& grid, const FluidParams& params, const State& state);

struct DissipationRate {
  double value = 0;  // int mu/2 |grad u + grad u^T - 2/3 div u I|^2 + eta (div u)^2
  double paper = 0;  // bulk term as eta |div u I|^2 = 3 eta (div u)^2 instead
};

/// paper - value == 2 eta int (div u)^2 exactly (both are formed from the
/// same divergence integral).
DissipationRate dissipation_rate(const MappedGrid& grid, const FluidParams& params,
                                 const State& state);

/// ||grad v||^2 over the domain, all three components.
double grad_norm_sq(const MappedGrid& grid, const Velocity& v);

/// int over {z=1} of the squared field component.
double trace_sq(const MappedGrid& grid, const Field& component);

struct ComponentMask {
  bool u1 = true, u2 = true, u3 = true;
};

struct RatioResult {
  double value = 0;
  bool unbounded = false;  // zero gradient against a nonzero trace
};

/// R = int_{z=1} |v_sel|^2 dsigma / ||grad v||^2. The component mask filters
/// the trace (numerator); the gradient norm always takes the full field.
/// Unbounded (not an error) marks ||grad v||^2 <= 1e-30 with nonzero trace.
RatioResult trace_ratio(const MappedGrid& grid, const Velocity& v, ComponentMask sel = {});

/// Divergence-free velocity field, impermeable on both boundaries, built from
/// the stream function psi = w g((h(x)-z)/w) b(z) sin(2 pi m x) with
/// w = eps * sup(slice Phi) and quintic-smoothstep g, b. The boundary-following
/// part lives in an O(eps) layer under the rough top, so its trace on {z=1}
/// stays O(1) while ||grad v||^2 grows like 1/eps. v2 = 0; v = 0 on the rough
/// top itself; evaluated analytically at cell centers.
Velocity synthetic_slip_field(const MappedGrid& grid, int mode_index);

/// max |v . n| sampled along the rough top boundary (analytic continuation of
/// the same construction); discretization-free identity check.
double synthetic_slip_normal_residual(const MappedGrid& grid, int mode_index,
                                      int n_samples = 1024);

struct KornBounds {
  double m = 1e-9;   // lower bound for int r
  double M = 1e9;    // upper bound for int r^nu
  double nu = 0;     // 0 means: use gamma
};

/// K = ||v||^2_{W^{1,2}} / ( ||grad v + grad v^T - 2/3 div v I||_{L^2}
///                           + int r |v| )^2 ; returns 0 for v = 0.
/// Throws Error(WeightDegenerate) when int r < m or int r^nu > M.
double korn_ratio(const MappedGrid& grid, const Velocity& v, const Field& r,
                  const FluidParams& params, KornBounds bounds = {});

/// Instantaneous int p(rho) rho^theta with theta = 2/3 gamma - 1.
double pressure_moment(const MappedGrid& grid, const FluidParams& params,
                       const State& state);

/// Time-integrated int_0^T int p(rho) rho^theta, trapezoid over snapshots.
double pressure_functional(const MappedGrid& grid, const FluidParams& params,
                           std::span<const State> states);

struct DiagnosticsRecord {
  double t = 0;
  double E = 0;
  double D_cum = 0;
  double D_paper_cum = 0;
  double mass = 0;
  double trace_sq_u1 = 0, trace_sq_u2 = 0, trace_sq_u3 = 0;
  double grad_sq = 0;
  double pressure_fn = 0;
  // instantaneous rates carried along for the trapezoid accumulation
  double d_rate = 0, d_paper_rate = 0;
};

/// Packages all scalar functionals at the state's time; prev (may be null)
/// supplies the accumulated dissipation for the trapezoid rule.
DiagnosticsRecord record(const MappedGrid& grid, const FluidParams& params,
                         const State& state, const DiagnosticsRecord* prev);

struct DiagnosticsSeries {
  std::vector<DiagnosticsRecord> records;
};

}  // namespace rugose
