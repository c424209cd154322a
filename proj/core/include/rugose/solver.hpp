#pragma once

#include <variant>
#include <vector>

#include "rugose/field.hpp"
#include "rugose/grid.hpp"

namespace rugose {

/// Constitutive constants: pressure law p(rho) = a rho^gamma and the Newtonian
/// stress S = mu (grad u + grad u^T - 2/3 div u I) + eta div u I.
class FluidParams {
 public:
  FluidParams(double a, double gamma, double mu, double eta);

  double a() const { return a_; }
  double gamma() const { return gamma_; }
  double mu() const { return mu_; }
  double eta() const { return eta_; }

  double pressure(double rho) const { return a_ * std::pow(rho, gamma_); }
  double sound_speed(double rho) const {
    return std::sqrt(a_ * gamma_ * std::pow(rho, gamma_ - 1.0));
  }

 private:
  double a_, gamma_, mu_, eta_;
};

/// Conservative fields at one time instant: density and momentum m = rho u.
/// Planar25D: all fields invariant in x2, velocity keeps three components.
struct State {
  State() = default;
  State(int nx, int nz) : rho(nx, nz, 1.0), m1(nx, nz), m2(nx, nz), m3(nx, nz) {}

  Field rho, m1, m2, m3;
  double t = 0;
};

struct UniformRest {
  double rho0 = 1.0;
};

/// Shear profile u1 = U1 * min(z,1) * taper(z), u2 = U2 * min(z,1), u3 = 0.
/// The taper is a fixed-width (0.25) quintic rolloff that sends u1 to zero at
/// z = 1 and keeps it zero in the rough layer, so the initial data is exactly
/// impermeable on every rough top and independent of epsilon.
struct Shear {
  double rho0 = 1.0;
  double u1 = 1.0;
  double u2 = 0.0;
};

using InitialCondition = std::variant<UniformRest, Shear>;

State init_state(const MappedGrid& grid, const InitialCondition& ic);

/// Fills the ghost rim: periodic wrap in x; bottom ghosts mirror with full
/// velocity sign flip (no-slip) and even density; top ghosts reflect velocity
/// across the local boundary tangent plane (normal component flipped,
/// tangential copied -- zero tangential stress to the scheme's order) with
/// even density. The reflection normal is the FV face normal of the column.
void apply_boundary(const MappedGrid& grid, State& state);

/// u_ghost = u - 2 (u . n) n
Vec3 reflect_full_slip(Vec3 u, Vec3 n);

struct Rates {
  Rates() = default;
  Rates(int nx, int nz) : rho(nx, nz), m1(nx, nz), m2(nx, nz), m3(nx, nz) {}
  Field rho, m1, m2, m3;
};

struct RhsScratch {
  std::vector<double> u1, u2, u3, pr, cs;
  int nx = 0, nz = 0;
};

/// Time tendencies of (rho, m) in conservative form. Hyperbolic part: Rusanov
/// flux with signal speed |u.n| + c, c = sqrt(a gamma rho^(gamma-1)); viscous
/// part: face-centered stress from compact/averaged gradients of the full
/// 3x3 velocity gradient (d/dx2 == 0). Requires ghosts filled.
/// Throws NonPositiveDensityError if rho <= 0 anywhere in the interior.
void rhs(const MappedGrid& grid, const FluidParams& params, const State& state,
         Rates& out, RhsScratch& scratch);
Rates rhs(const MappedGrid& grid, const FluidParams& params, const State& state);

/// dt = cfl * min over cells of ( d/(|u|+c), d^2 rho / (2 mu + eta) / 2 ),
/// d the smallest physical cell edge.
double cfl_dt(const MappedGrid& grid, const FluidParams& params, const State& state,
              double cfl);

struct StepScratch {
  Rates r1, r2;
  State stage;
  RhsScratch prim;
};

/// Heun (two-stage, second-order) update; applies boundary conditions before
/// each stage and after the final combination. Mass is conserved to round-off.
/// Throws NonPositiveDensityError if the update produces rho <= 0.
void step(const MappedGrid& grid, const FluidParams& params, State& state, double dt,
          StepScratch& scratch);
void step(const MappedGrid& grid, const FluidParams& params, State& state, double dt);

/// Total mass integrate(rho).
double total_mass(const MappedGrid& grid, const State& state);

/// Max |u| over the interior.
double max_speed(const MappedGrid& grid, const State& state);

}  // namespace rugose
