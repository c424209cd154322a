#pragma once

#include <cmath>
#include <vector>

#include "rugose/errors.hpp"

namespace rugose {

struct Vec2 {
  double x = 0, y = 0;
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

enum class ProfileKind { Flat, Riblet, EggCarton, Tabulated };

/// Periodic boundary shape Phi on the unit cell: positive, 1-periodic in each
/// tangential coordinate, with a sampled Lipschitz constant. Analytic kinds:
///   Flat       Phi = c0
///   Riblet     Phi = c0 + c1 sin(2 pi y1)
///   EggCarton  Phi = c0 + c1 sin(2 pi y1) + c2 sin(2 pi y2)
/// Tabulated profiles interpolate n x n samples with periodic cubic B-splines
/// (C^2). Immutable after construction.
class RoughProfile {
 public:
  RoughProfile() = default;  // Flat with c0 = 1

  ProfileKind kind() const { return kind_; }
  double c0() const { return c0_; }
  double c1() const { return c1_; }
  double c2() const { return c2_; }

  double value(Vec2 y) const;
  Vec2 gradient(Vec2 y) const;

  /// Sampled sup |grad Phi| over the unit cell (the Lipschitz constant L).
  double lipschitz() const { return lipschitz_; }
  /// Sampled sup / inf of Phi over the unit cell.
  double sup_value() const { return sup_; }
  double min_value() const { return min_; }

  /// sup of the y2 = 0 slice (the height scale seen by a Planar25D grid).
  double slice_sup() const { return slice_sup_; }

  friend RoughProfile make_profile(ProfileKind kind, double c0, double c1, double c2);
  friend RoughProfile make_tabulated_profile(const std::vector<std::vector<double>>& samples);

 private:
  void finalize_samples();

  ProfileKind kind_ = ProfileKind::Flat;
  double c0_ = 1, c1_ = 0, c2_ = 0;
  // tabulated data: n x n periodic B-spline control points, row-major
  int table_n_ = 0;
  std::vector<double> coeff_;
  double lipschitz_ = 0, sup_ = 1, min_ = 1, slice_sup_ = 1;
};

/// Builds an analytic profile. Positivity requires c0 > |c1| + |c2|;
/// throws Error(NonPositiveProfile) otherwise.
RoughProfile make_profile(ProfileKind kind, double c0, double c1, double c2);

/// Builds a Tabulated profile from n x n samples at y = (i/n, j/n).
/// Throws Error(NonPositiveProfile) if the interpolant dips to <= 0.
RoughProfile make_tabulated_profile(const std::vector<std::vector<double>>& samples);

enum class DomainMode { Planar25D, Full3D };

/// The rough channel at roughness scale epsilon: 0 < x3 < 1 + eps*Phi(x/eps).
/// epsilon must be the reciprocal of a positive integer so the rough cell
/// tiles the unit torus exactly.
struct DomainSpec {
  double epsilon = 1.0;
  RoughProfile profile;
  DomainMode mode = DomainMode::Planar25D;

  int periods() const { return static_cast<int>(std::lround(1.0 / epsilon)); }
};

DomainSpec make_domain_spec(RoughProfile profile, double epsilon,
                            DomainMode mode = DomainMode::Planar25D);

/// h(x) = 1 + eps * Phi(x/eps) at a tangential point x.
double eval_height(const DomainSpec& spec, Vec2 x);

/// Unit outer normal on the rough top boundary above tangential point x;
/// proportional to (-d1 Phi_eps, -d2 Phi_eps, 1). The chain rule cancels eps.
Vec3 boundary_normal(const DomainSpec& spec, Vec2 x);

/// Empirical statistics of the gradient field grad Phi over the unit cell.
struct RugosityMoments {
  Vec2 mean;                      // sample mean of grad Phi
  double m11 = 0, m12 = 0, m22 = 0;  // second-moment matrix entries
  int rank = 0;                   // eigenvalues above 1e-8 * trace
  Vec2 null_direction;            // zero-variance direction when rank == 1
};

/// n_per_axis >= 64 required (midpoint sampling of the unit cell).
RugosityMoments rugosity_moments(const RoughProfile& profile, int n_per_axis = 256);
RugosityMoments rugosity_moments(const DomainSpec& spec, int n_per_axis = 256);

enum class Nondegeneracy { Constant, DegenerateDirection, NonDegenerate };

struct NondegeneracyResult {
  Nondegeneracy kind = Nondegeneracy::Constant;
  Vec2 direction;  // the invariant (groove) direction when degenerate
};

/// Classifies the profile by the rank of the gradient second-moment matrix:
/// rank 0 -> Constant, rank 1 -> DegenerateDirection, rank 2 -> NonDegenerate.
NondegeneracyResult nondegeneracy_check(const RoughProfile& profile);

// Slice quantities used by the Planar25D grid (profile evaluated at y2 = 0).
double slice_height(const DomainSpec& spec, double x);  // 1 + eps*Phi(x/eps, 0)
double slice_slope(const DomainSpec& spec, double x);   // d/dx of the above

}  // namespace rugose
