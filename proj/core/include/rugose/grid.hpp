#pragma once

#include <vector>

#include "rugose/field.hpp"
#include "rugose/geometry.hpp"

namespace rugose {

/// Terrain-following structured grid on the rough channel. The mapping is
/// (x, z) = (xi, sigma * h(xi)) with (xi, sigma) in [0,1) x [0,1]; sigma = 1
/// is the rough top boundary, sigma = 0 the flat bottom. Periodic in xi.
/// Planar25D only: fields are invariant in x2; columns are indexed by i.
/// Immutable after construction.
class MappedGrid {
 public:
  /// Checked factory: enforces nz >= 16 and the resolution rule
  /// nx * epsilon >= 16 (at least 16 cells per roughness period).
  /// Throws Error(UnderResolved) / Error(UnsupportedMode).
  static MappedGrid build(const DomainSpec& spec, int nx, int nz);

  /// Unchecked construction for oracles and tiny test grids; bypasses the
  /// resolution rule (still rejects Full3D).
  static MappedGrid unchecked(const DomainSpec& spec, int nx, int nz);

  const DomainSpec& spec() const { return spec_; }
  int nx() const { return nx_; }
  int nz() const { return nz_; }
  double dxi() const { return dxi_; }
  double dsigma() const { return dsg_; }

  double x_center(int i) const { return (i + 0.5) * dxi_; }
  double x_face(int i) const { return i * dxi_; }
  double sigma_center(int k) const { return (k + 0.5) * dsg_; }
  double sigma_face(int k) const { return k * dsg_; }
  double z_phys(int i, int k) const { return sigma_center(k) * h_cell_[wrap(i)]; }

  /// Column height at the cell center / at face i (x = i*dxi).
  double h(int i) const { return h_cell_[wrap(i)]; }
  double h_face(int i) const { return h_face_[wrapf(i)]; }
  /// Central-difference slope of h at the cell center (grad_phys metric).
  double dh(int i) const { return dh_cell_[wrap(i)]; }
  /// Face-telescoped slope (h_face[i+1]-h_face[i])/dxi (flux metric; makes
  /// constant states exact discrete equilibria).
  double dh_flux(int i) const { return dh_flux_[wrap(i)]; }

  double cell_volume(int i) const { return h_cell_[wrap(i)] * dxi_ * dsg_; }
  double weight(int i, int k) const { (void)k; return cell_volume(i); }
  double volume() const { return volume_; }

  /// Unit outward normal (n1, n3) of the top boundary face over cell i
  /// (the FV polyline normal, from the face-telescoped slope).
  Vec2 top_face_normal(int i) const {
    const double s = dh_flux_[wrap(i)];
    const double inv = 1.0 / std::sqrt(1.0 + s * s);
    return {-s * inv, inv};
  }

 private:
  MappedGrid(const DomainSpec& spec, int nx, int nz);
  int wrap(int i) const { return (i % nx_ + nx_) % nx_; }
  int wrapf(int i) const { return (i % nx_ + nx_) % nx_; }

  DomainSpec spec_;
  int nx_ = 0, nz_ = 0;
  double dxi_ = 0, dsg_ = 0, volume_ = 0;
  std::vector<double> h_cell_, h_face_, dh_cell_, dh_flux_;
};

inline MappedGrid build_grid(const DomainSpec& spec, int nx, int nz) {
  return MappedGrid::build(spec, nx, nz);
}

struct GradField {
  Field dx, dz;
};

/// Physical gradient of a cell-centered field by the chain rule
///   d/dx = d/dxi - sigma (h'/h) d/dsigma,   d/dz = (1/h) d/dsigma,
/// second-order central stencils (one-sided at the sigma walls). Exact on
/// affine functions of (x, z). Pure function of interior data.
GradField grad_phys(const MappedGrid& grid, const Field& f);

/// Quadrature over the physical domain: sum w(i,k) * f(i,k).
double integrate(const MappedGrid& grid, const Field& f);

/// Samples of f on the physical line {z = 1}, one per column, obtained by
/// linear interpolation in sigma at sigma* = 1/h(i); dx is the line
/// quadrature weight.
struct TraceLine {
  std::vector<double> values;
  double dx = 0;
};

TraceLine trace_line(const MappedGrid& grid, const Field& f);

}  // namespace rugose
