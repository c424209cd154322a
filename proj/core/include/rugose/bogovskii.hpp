#pragma once

#include <string>
#include <vector>

#include "rugose/analysis.hpp"
#include "rugose/grid.hpp"

namespace rugose {

/// MAC-staggered velocity for the divergence problem: v1 on vertical faces
/// (periodic in i, cell-centered in sigma), v3 on interior horizontal faces;
/// v3 = 0 on both walls and v1 = 0 at the walls are built into the operators,
/// so every stored degree of freedom is an unknown.
struct StagVel {
  StagVel() = default;
  StagVel(int nx, int nz)
      : nx(nx), nz(nz), v1(static_cast<size_t>(nx) * nz, 0.0),
        v3(static_cast<size_t>(nx) * (nz - 1), 0.0) {}

  int nx = 0, nz = 0;
  std::vector<double> v1;  // [f*nz + k], face column f, sigma row k
  std::vector<double> v3;  // [i*(nz-1) + (j-1)], column i, interior face j

  size_t size() const { return v1.size() + v3.size(); }
};

/// div v = g with v = 0 on the boundary, g mean-free on the cells.
/// The constructor subtracts the volume-weighted mean of g.
struct BogovskiiProblem {
  BogovskiiProblem(const MappedGrid& grid, const Field& g, double tolerance,
                   int max_iterations);

  const MappedGrid* grid;
  std::vector<double> g;  // cell values, weighted mean removed
  double tolerance;       // absolute L2 bound on ||div v - g||
  int max_iterations;
};

struct BogovskiiSolution {
  StagVel v;
  int iterations = 0;    // outer (Uzawa) iterations
  double residual = 0;   // final ||div v - g||_{L2}
};

/// Minimizes ||grad v||^2 subject to div v = g, v = 0 on the boundary:
/// a Stokes-type saddle point solved by Uzawa iteration (conjugate gradients
/// on the pressure Schur complement) with CG inner solves of the vector
/// Poisson problem. Throws NoConvergenceError past max_iterations.
BogovskiiSolution bogovskii_solve(const BogovskiiProblem& problem);

// Discrete operators, exposed for oracles and diagnostics.
std::vector<double> bogovskii_divergence(const MappedGrid& grid, const StagVel& v);
StagVel bogovskii_energy_matvec(const MappedGrid& grid, const StagVel& v);        // A v
StagVel bogovskii_div_adjoint_weighted(const MappedGrid& grid,
                                       const std::vector<double>& lambda);        // B^T W
std::vector<double> bogovskii_cell_weights(const MappedGrid& grid);

double bogovskii_energy(const MappedGrid& grid, const StagVel& v);    // v^T A v
double bogovskii_l2_sq(const MappedGrid& grid, const StagVel& v);     // lumped mass
double bogovskii_w12_norm(const MappedGrid& grid, const StagVel& v);

/// Cell-centered interpolation (u2 = 0) for inspection and output.
Velocity bogovskii_to_velocity(const MappedGrid& grid, const StagVel& v);

struct BogovskiiSweepOptions {
  int cells_per_period = 16;
  int nz = 32;
  double rel_tolerance = 1e-7;  // tolerance = rel * ||g||_{L2}
  int max_iterations = 1000;
};

struct BogovskiiSweepRow {
  double epsilon = 0;
  int g_id = 0;
  double norm_ratio = 0;  // ||v||_{W^{1,2}} / ||g||_{L2}
  int iterations = 0;
  double residual = 0;
  std::string status;  // "ok" or the error message
};

struct BogovskiiSweepResult {
  std::vector<BogovskiiSweepRow> rows;
  std::vector<double> n_eps;  // per-epsilon N(eps) = max_g norm_ratio
  double max_over_min = 0;    // across epsilons, successes only
};

/// Sweeps N(eps) = max_g ||v||_{W^{1,2}} / ||g||_{L2} over the epsilon list
/// with a fixed smooth g family, at matched per-period resolution.
BogovskiiSweepResult bogovskii_norm_sweep(const RoughProfile& profile,
                                          const std::vector<double>& epsilons,
                                          const BogovskiiSweepOptions& opts = {});

}  // namespace rugose
