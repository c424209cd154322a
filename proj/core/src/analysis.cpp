#include "rugose/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace rugose {

Velocity velocity_from(const MappedGrid& grid, const State& state) {
  const int nx = grid.nx(), nz = grid.nz();
  Velocity v(nx, nz);
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      const double inv = 1.0 / state.rho(i, k);
      v.u1(i, k) = state.m1(i, k) * inv;
      v.u2(i, k) = state.m2(i, k) * inv;
      v.u3(i, k) = state.m3(i, k) * inv;
    }
  }
  return v;
}

double energy(const MappedGrid& grid, const FluidParams& params, const State& state) {
  const int nx = grid.nx(), nz = grid.nz();
  const double a = params.a(), g = params.gamma();
  double e = 0;
  for (int i = 0; i < nx; ++i) {
    double col = 0;
    for (int k = 0; k < nz; ++k) {
      const double r = state.rho(i, k);
      const double m1 = state.m1(i, k), m2 = state.m2(i, k), m3 = state.m3(i, k);
      const double kin = 0.5 * (m1 * m1 + m2 * m2 + m3 * m3) / r;
      const double pot = a * (std::pow(r, g) - r) / (g - 1.0);
      col += kin + pot;
    }
    e += col * grid.cell_volume(i);
  }
  return e;
}

namespace {

struct GradVel {
  GradField g1, g2, g3;
};

GradVel gradients(const MappedGrid& grid, const Velocity& v) {
  return {grad_phys(grid, v.u1), grad_phys(grid, v.u2), grad_phys(grid, v.u3)};
}

// Frobenius norm^2 of grad u + grad u^T - 2/3 div u I at one cell
// (d/dx2 == 0 throughout).
double deviatoric_sq_at(const GradVel& g, int i, int k, double* div_out) {
  const double g1x = g.g1.dx(i, k), g1z = g.g1.dz(i, k);
  const double g2x = g.g2.dx(i, k), g2z = g.g2.dz(i, k);
  const double g3x = g.g3.dx(i, k), g3z = g.g3.dz(i, k);
  const double div = g1x + g3z;
  if (div_out) *div_out = div;
  const double c = 2.0 / 3.0 * div;
  const double d11 = 2.0 * g1x - c;
  const double d22 = -c;
  const double d33 = 2.0 * g3z - c;
  const double d12 = g2x;
  const double d13 = g1z + g3x;
  const double d23 = g2z;
  return d11 * d11 + d22 * d22 + d33 * d33 + 2.0 * (d12 * d12 + d13 * d13 + d23 * d23);
}

}  // namespace

DissipationRate dissipation_rate(const MappedGrid& grid, const FluidParams& params,
                                 const State& state) {
  const Velocity v = velocity_from(grid, state);
  const GradVel g = gradients(grid, v);
  const int nx = grid.nx(), nz = grid.nz();
  double dphys = 0, idiv2 = 0;
  for (int i = 0; i < nx; ++i) {
    double col = 0, cold = 0;
    for (int k = 0; k < nz; ++k) {
      double div;
      const double dev2 = deviatoric_sq_at(g, i, k, &div);
      col += 0.5 * params.mu() * dev2 + params.eta() * div * div;
      cold += div * div;
    }
    dphys += col * grid.cell_volume(i);
    idiv2 += cold * grid.cell_volume(i);
  }
  DissipationRate d;
  d.value = dphys;
  d.paper = dphys + 2.0 * params.eta() * idiv2;
  return d;
}

double grad_norm_sq(const MappedGrid& grid, const Velocity& v) {
  const GradVel g = gradients(grid, v);
  const int nx = grid.nx(), nz = grid.nz();
  double s = 0;
  for (int i = 0; i < nx; ++i) {
    double col = 0;
    for (int k = 0; k < nz; ++k) {
      col += g.g1.dx(i, k) * g.g1.dx(i, k) + g.g1.dz(i, k) * g.g1.dz(i, k) +
             g.g2.dx(i, k) * g.g2.dx(i, k) + g.g2.dz(i, k) * g.g2.dz(i, k) +
             g.g3.dx(i, k) * g.g3.dx(i, k) + g.g3.dz(i, k) * g.g3.dz(i, k);
    }
    s += col * grid.cell_volume(i);
  }
  return s;
}

double trace_sq(const MappedGrid& grid, const Field& component) {
  const TraceLine tl = trace_line(grid, component);
  double s = 0;
  for (double v : tl.values) s += v * v;
  return s * tl.dx;
}

RatioResult trace_ratio(const MappedGrid& grid, const Velocity& v, ComponentMask sel) {
  double tr = 0;
  if (sel.u1) tr += trace_sq(grid, v.u1);
  if (sel.u2) tr += trace_sq(grid, v.u2);
  if (sel.u3) tr += trace_sq(grid, v.u3);
  const double g2 = grad_norm_sq(grid, v);
  RatioResult r;
  if (g2 <= 1e-30) {
    if (tr > 0) {
      r.unbounded = true;
      return r;
    }
    r.value = 0;
    return r;
  }
  r.value = tr / g2;
  return r;
}

namespace {

double smooth5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double dsmooth5(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  const double omt = 1.0 - t;
  return 30.0 * t * t * omt * omt;
}

struct SlipFieldEval {
  const DomainSpec* spec;
  double w;  // layer width = eps * sup(slice Phi)
  int m;

  void operator()(double x, double z, double* v1, double* v3) const {
    const double hx = slice_height(*spec, x);
    const double dhx = slice_slope(*spec, x);
    const double tau = (hx - z) / w;
    const double g = smooth5(tau);
    const double gp = dsmooth5(tau);
    const double b = smooth5(z / 0.5);
    const double bp = dsmooth5(z / 0.5) / 0.5;
    const double sx = std::sin(2.0 * M_PI * m * x);
    const double cx = std::cos(2.0 * M_PI * m * x);
    *v1 = (gp * b - w * g * bp) * sx;
    *v3 = gp * dhx * b * sx + 2.0 * M_PI * m * w * g * b * cx;
  }
};

SlipFieldEval make_slip_eval(const MappedGrid& grid, int mode_index) {
  if (mode_index < 1)
    throw Error(Errc::InvalidArgument, "synthetic_slip_field requires mode_index >= 1");
  const DomainSpec& spec = grid.spec();
  return SlipFieldEval{&spec, spec.epsilon * spec.profile.slice_sup(), mode_index};
}

}  // namespace

Velocity synthetic_slip_field(const MappedGrid& grid, int mode_index) {
  const SlipFieldEval ev = make_slip_eval(grid, mode_index);
  const int nx = grid.nx(), nz = grid.nz();
  Velocity v(nx, nz);
  for (int i = 0; i < nx; ++i) {
    const double x = grid.x_center(i);
    for (int k = 0; k < nz; ++k) {
      double v1, v3;
      ev(x, grid.z_phys(i, k), &v1, &v3);
      v.u1(i, k) = v1;
      v.u3(i, k) = v3;
    }
  }
  return v;
}

double synthetic_slip_normal_residual(const MappedGrid& grid, int mode_index,
                                      int n_samples) {
  const SlipFieldEval ev = make_slip_eval(grid, mode_index);
  const DomainSpec& spec = grid.spec();
  double worst = 0;
  for (int j = 0; j < n_samples; ++j) {
    const double x = (j + 0.5) / n_samples;
    const double hx = slice_height(spec, x);
    const double dhx = slice_slope(spec, x);
    double v1, v3;
    ev(x, hx, &v1, &v3);
    const double vn = (-v1 * dhx + v3) / std::sqrt(1.0 + dhx * dhx);
    worst = std::max(worst, std::abs(vn));
  }
  return worst;
}

double korn_ratio(const MappedGrid& grid, const Velocity& v, const Field& r,
                  const FluidParams& params, KornBounds bounds) {
  const int nx = grid.nx(), nz = grid.nz();
  const double nu = (bounds.nu > 0) ? bounds.nu : params.gamma();

  double int_r = 0, int_rnu = 0;
  for (int i = 0; i < nx; ++i) {
    double c1 = 0, c2 = 0;
    for (int k = 0; k < nz; ++k) {
      const double rv = r(i, k);
      c1 += rv;
      c2 += std::pow(std::max(rv, 0.0), nu);
    }
    int_r += c1 * grid.cell_volume(i);
    int_rnu += c2 * grid.cell_volume(i);
  }
  if (!(int_r >= bounds.m))
    throw Error(Errc::WeightDegenerate, "korn_ratio: int r below the lower bound m");
  if (!(int_rnu <= bounds.M))
    throw Error(Errc::WeightDegenerate, "korn_ratio: int r^nu above the upper bound M");

  const GradVel g = gradients(grid, v);
  double l2 = 0, dev2 = 0, rv1 = 0;
  for (int i = 0; i < nx; ++i) {
    double cl = 0, cd = 0, cr = 0;
    for (int k = 0; k < nz; ++k) {
      const double a1 = v.u1(i, k), a2 = v.u2(i, k), a3 = v.u3(i, k);
      const double vv = a1 * a1 + a2 * a2 + a3 * a3;
      cl += vv + g.g1.dx(i, k) * g.g1.dx(i, k) + g.g1.dz(i, k) * g.g1.dz(i, k) +
            g.g2.dx(i, k) * g.g2.dx(i, k) + g.g2.dz(i, k) * g.g2.dz(i, k) +
            g.g3.dx(i, k) * g.g3.dx(i, k) + g.g3.dz(i, k) * g.g3.dz(i, k);
      cd += deviatoric_sq_at(g, i, k, nullptr);
      cr += r(i, k) * std::sqrt(vv);
    }
    const double w = grid.cell_volume(i);
    l2 += cl * w;
    dev2 += cd * w;
    rv1 += cr * w;
  }
  if (l2 <= 0) return 0.0;  // v = 0 convention
  const double rhs = std::sqrt(dev2) + rv1;
  return l2 / (rhs * rhs);
}

double pressure_moment(const MappedGrid& grid, const FluidParams& params,
                       const State& state) {
  const double theta = 2.0 / 3.0 * params.gamma() - 1.0;
  const int nx = grid.nx(), nz = grid.nz();
  double s = 0;
  for (int i = 0; i < nx; ++i) {
    double col = 0;
    for (int k = 0; k < nz; ++k) {
      const double r = state.rho(i, k);
      col += params.pressure(r) * std::pow(r, theta);
    }
    s += col * grid.cell_volume(i);
  }
  return s;
}

double pressure_functional(const MappedGrid& grid, const FluidParams& params,
                           std::span<const State> states) {
  if (states.size() < 2)
    throw Error(Errc::InvalidArgument, "pressure_functional needs at least two snapshots");
  double acc = 0;
  double prev_v = pressure_moment(grid, params, states[0]);
  for (size_t j = 1; j < states.size(); ++j) {
    const double cur_v = pressure_moment(grid, params, states[j]);
    acc += 0.5 * (prev_v + cur_v) * (states[j].t - states[j - 1].t);
    prev_v = cur_v;
  }
  return acc;
}

DiagnosticsRecord record(const MappedGrid& grid, const FluidParams& params,
                         const State& state, const DiagnosticsRecord* prev) {
  DiagnosticsRecord r;
  r.t = state.t;
  r.E = energy(grid, params, state);
  r.mass = total_mass(grid, state);
  const Velocity v = velocity_from(grid, state);
  r.trace_sq_u1 = trace_sq(grid, v.u1);
  r.trace_sq_u2 = trace_sq(grid, v.u2);
  r.trace_sq_u3 = trace_sq(grid, v.u3);
  r.grad_sq = grad_norm_sq(grid, v);
  r.pressure_fn = pressure_moment(grid, params, state);
  const DissipationRate d = dissipation_rate(grid, params, state);
  r.d_rate = d.value;
  r.d_paper_rate = d.paper;
  if (prev) {
    const double dt = r.t - prev->t;
    r.D_cum = prev->D_cum + 0.5 * (prev->d_rate + r.d_rate) * dt;
    r.D_paper_cum = prev->D_paper_cum + 0.5 * (prev->d_paper_rate + r.d_paper_rate) * dt;
  }
  return r;
}

}  // namespace rugose
