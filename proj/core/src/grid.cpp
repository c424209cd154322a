#include "rugose/grid.hpp"

#include <algorithm>
#include <cmath>

namespace rugose {

MappedGrid::MappedGrid(const DomainSpec& spec, int nx, int nz)
    : spec_(spec), nx_(nx), nz_(nz), dxi_(1.0 / nx), dsg_(1.0 / nz) {
  h_cell_.resize(nx);
  h_face_.resize(nx);
  dh_cell_.resize(nx);
  dh_flux_.resize(nx);
  for (int i = 0; i < nx; ++i) {
    h_cell_[i] = slice_height(spec_, (i + 0.5) * dxi_);
    h_face_[i] = slice_height(spec_, i * dxi_);
  }
  for (int i = 0; i < nx; ++i) {
    const double hp = h_face_[(i + 1) % nx];
    dh_flux_[i] = (hp - h_face_[i]) / dxi_;
    dh_cell_[i] = (h_cell_[(i + 1) % nx] - h_cell_[(i - 1 + nx) % nx]) / (2.0 * dxi_);
  }
  double v = 0;
  for (int i = 0; i < nx; ++i) v += h_cell_[i];
  volume_ = v * dxi_;
}

MappedGrid MappedGrid::build(const DomainSpec& spec, int nx, int nz) {
  if (spec.mode != DomainMode::Planar25D)
    throw Error(Errc::UnsupportedMode, "grid supports Planar25D mode only");
  if (nz < 16) throw Error(Errc::UnderResolved, "nz must be at least 16");
  if (nx * spec.epsilon < 16.0 * (1.0 - 1e-12))
    throw Error(Errc::UnderResolved,
                "resolution rule violated: need at least 16 cells per roughness period "
                "(nx * epsilon >= 16)");
  return MappedGrid(spec, nx, nz);
}

MappedGrid MappedGrid::unchecked(const DomainSpec& spec, int nx, int nz) {
  if (spec.mode != DomainMode::Planar25D)
    throw Error(Errc::UnsupportedMode, "grid supports Planar25D mode only");
  return MappedGrid(spec, nx, nz);
}

GradField grad_phys(const MappedGrid& grid, const Field& f) {
  const int nx = grid.nx(), nz = grid.nz();
  const double dxi = grid.dxi(), dsg = grid.dsigma();
  GradField g{Field(nx, nz), Field(nx, nz)};
  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx, im = (i - 1 + nx) % nx;
    const double hi = grid.h(i), dhi = grid.dh(i);
    for (int k = 0; k < nz; ++k) {
      const double dfxi = (f(ip, k) - f(im, k)) / (2.0 * dxi);
      double dfsg;
      if (k == 0)
        dfsg = (-3.0 * f(i, 0) + 4.0 * f(i, 1) - f(i, 2)) / (2.0 * dsg);
      else if (k == nz - 1)
        dfsg = (3.0 * f(i, nz - 1) - 4.0 * f(i, nz - 2) + f(i, nz - 3)) / (2.0 * dsg);
      else
        dfsg = (f(i, k + 1) - f(i, k - 1)) / (2.0 * dsg);
      const double sg = grid.sigma_center(k);
      g.dx(i, k) = dfxi - sg * (dhi / hi) * dfsg;
      g.dz(i, k) = dfsg / hi;
    }
  }
  return g;
}

double integrate(const MappedGrid& grid, const Field& f) {
  const int nx = grid.nx(), nz = grid.nz();
  double s = 0;
  for (int i = 0; i < nx; ++i) {
    double col = 0;
    for (int k = 0; k < nz; ++k) col += f(i, k);
    s += col * grid.cell_volume(i);
  }
  return s;
}

TraceLine trace_line(const MappedGrid& grid, const Field& f) {
  const int nx = grid.nx(), nz = grid.nz();
  TraceLine tl;
  tl.dx = grid.dxi();
  tl.values.resize(nx);
  for (int i = 0; i < nx; ++i) {
    const double zs = 1.0 / grid.h(i);           // sigma of the physical line z = 1
    const double t = zs / grid.dsigma() - 0.5;   // fractional cell-center index
    int k0 = static_cast<int>(std::floor(t));
    k0 = std::clamp(k0, 0, nz - 2);
    const double u = t - k0;                     // may exceed [0,1] slightly: extrapolation
    tl.values[i] = (1.0 - u) * f(i, k0) + u * f(i, k0 + 1);
  }
  return tl;
}

}  // namespace rugose
