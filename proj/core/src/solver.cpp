#include "rugose/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rugose {

FluidParams::FluidParams(double a, double gamma, double mu, double eta)
    : a_(a), gamma_(gamma), mu_(mu), eta_(eta) {
  if (!(a > 0)) throw Error(Errc::InvalidArgument, "pressure coefficient a must be > 0");
  if (!(gamma > 1.5))
    throw Error(Errc::InvalidArgument, "adiabatic exponent gamma must be > 3/2");
  if (!(mu > 0)) throw Error(Errc::InvalidArgument, "shear viscosity mu must be > 0");
  if (!(eta >= 0)) throw Error(Errc::InvalidArgument, "bulk viscosity eta must be >= 0");
}

namespace {

double smoothstep5(double t) {
  t = std::clamp(t, 0.0, 1.0);
  return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

// Fixed-width rolloff: 1 for z <= 0.75, 0 for z >= 1.
double shear_taper(double z) {
  if (z >= 1.0) return 0.0;
  if (z <= 0.75) return 1.0;
  return smoothstep5((1.0 - z) / 0.25);
}

}  // namespace

State init_state(const MappedGrid& grid, const InitialCondition& ic) {
  const int nx = grid.nx(), nz = grid.nz();
  State s(nx, nz);
  if (const auto* rest = std::get_if<UniformRest>(&ic)) {
    if (!(rest->rho0 > 0)) throw Error(Errc::InvalidArgument, "rho0 must be > 0");
    s.rho.fill(rest->rho0);
    // momentum already zero
  } else {
    const auto& sh = std::get<Shear>(ic);
    if (!(sh.rho0 > 0)) throw Error(Errc::InvalidArgument, "rho0 must be > 0");
    for (int i = 0; i < nx; ++i) {
      for (int k = 0; k < nz; ++k) {
        const double z = grid.z_phys(i, k);
        const double zc = std::min(z, 1.0);
        const double u1 = sh.u1 * zc * shear_taper(z);
        const double u2 = sh.u2 * zc;
        s.rho(i, k) = sh.rho0;
        s.m1(i, k) = sh.rho0 * u1;
        s.m2(i, k) = sh.rho0 * u2;
        s.m3(i, k) = 0.0;
      }
    }
  }
  apply_boundary(grid, s);
  return s;
}

Vec3 reflect_full_slip(Vec3 u, Vec3 n) {
  const double un = dot(u, n);
  return {u.x - 2 * un * n.x, u.y - 2 * un * n.y, u.z - 2 * un * n.z};
}

void apply_boundary(const MappedGrid& grid, State& s) {
  const int nx = grid.nx(), nz = grid.nz();
  for (int i = 0; i < nx; ++i) {
    const Vec2 n = grid.top_face_normal(i);
    for (int g = 0; g < Field::kGhost; ++g) {
      // bottom: no-slip mirror
      s.rho(i, -1 - g) = s.rho(i, g);
      s.m1(i, -1 - g) = -s.m1(i, g);
      s.m2(i, -1 - g) = -s.m2(i, g);
      s.m3(i, -1 - g) = -s.m3(i, g);
      // top: full-slip reflection across the face tangent plane
      const int km = nz - 1 - g;
      const double mn = s.m1(i, km) * n.x + s.m3(i, km) * n.y;
      s.rho(i, nz + g) = s.rho(i, km);
      s.m1(i, nz + g) = s.m1(i, km) - 2.0 * mn * n.x;
      s.m2(i, nz + g) = s.m2(i, km);
      s.m3(i, nz + g) = s.m3(i, km) - 2.0 * mn * n.y;
    }
  }
  // periodic wrap in x, ghost rows included
  for (int g = 1; g <= Field::kGhost; ++g) {
    for (int k = -Field::kGhost; k < nz + Field::kGhost; ++k) {
      for (Field* f : {&s.rho, &s.m1, &s.m2, &s.m3}) {
        (*f)(-g, k) = (*f)(nx - g, k);
        (*f)(nx - 1 + g, k) = (*f)(g - 1, k);
      }
    }
  }
}

namespace {

struct Flux4 {
  double rho, m1, m2, m3;
};

inline int pidx(int nzp, int i, int k) { return (i + 1) * nzp + (k + 1); }

}  // namespace

void rhs(const MappedGrid& grid, const FluidParams& params, const State& state,
         Rates& out, RhsScratch& sc) {
  const int nx = grid.nx(), nz = grid.nz();
  const double dxi = grid.dxi(), dsg = grid.dsigma();
  const double mu = params.mu(), eta = params.eta();

  if (!out.rho.same_shape(state.rho)) out = Rates(nx, nz);
  out.rho.fill(0);
  out.m1.fill(0);
  out.m2.fill(0);
  out.m3.fill(0);

  // primitives with a one-cell ghost ring
  const int nxp = nx + 2, nzp = nz + 2;
  if (sc.nx != nx || sc.nz != nz) {
    sc.u1.assign(nxp * nzp, 0.0);
    sc.u2.assign(nxp * nzp, 0.0);
    sc.u3.assign(nxp * nzp, 0.0);
    sc.pr.assign(nxp * nzp, 0.0);
    sc.cs.assign(nxp * nzp, 0.0);
    sc.nx = nx;
    sc.nz = nz;
  }
  for (int i = -1; i <= nx; ++i) {
    for (int k = -1; k <= nz; ++k) {
      const double r = state.rho(i, k);
      if (i >= 0 && i < nx && k >= 0 && k < nz && !(r > 0.0))
        throw NonPositiveDensityError(state.t, "non-positive density at t=" +
                                                   std::to_string(state.t));
      const int q = pidx(nzp, i, k);
      const double inv = 1.0 / r;
      sc.u1[q] = state.m1(i, k) * inv;
      sc.u2[q] = state.m2(i, k) * inv;
      sc.u3[q] = state.m3(i, k) * inv;
      sc.pr[q] = params.pressure(r);
      sc.cs[q] = params.sound_speed(r);
    }
  }

  auto rusanov = [&](int iL, int kL, int iR, int kR, double a1, double a3) -> Flux4 {
    const int qL = pidx(nzp, iL, kL), qR = pidx(nzp, iR, kR);
    const double area = std::sqrt(a1 * a1 + a3 * a3);
    const double rL = state.rho(iL, kL), rR = state.rho(iR, kR);
    const double unL = sc.u1[qL] * a1 + sc.u3[qL] * a3;  // u . A
    const double unR = sc.u1[qR] * a1 + sc.u3[qR] * a3;
    const double s = std::max(std::abs(unL) / area + sc.cs[qL],
                              std::abs(unR) / area + sc.cs[qR]);
    Flux4 f;
    f.rho = 0.5 * (rL * unL + rR * unR) - 0.5 * s * area * (rR - rL);
    f.m1 = 0.5 * (state.m1(iL, kL) * unL + state.m1(iR, kR) * unR +
                  (sc.pr[qL] + sc.pr[qR]) * a1) -
           0.5 * s * area * (state.m1(iR, kR) - state.m1(iL, kL));
    f.m2 = 0.5 * (state.m2(iL, kL) * unL + state.m2(iR, kR) * unR) -
           0.5 * s * area * (state.m2(iR, kR) - state.m2(iL, kL));
    f.m3 = 0.5 * (state.m3(iL, kL) * unL + state.m3(iR, kR) * unR +
                  (sc.pr[qL] + sc.pr[qR]) * a3) -
           0.5 * s * area * (state.m3(iR, kR) - state.m3(iL, kL));
    return f;
  };

  // Viscous stress dotted with the face area vector, from the face-local
  // velocity gradient (dux[c] = du_c/dx, duz[c] = du_c/dz; d/dx2 == 0).
  auto stress_dot_area = [&](const double dux[3], const double duz[3], double a1,
                             double a3, double fv[3]) {
    const double div = dux[0] + duz[2];
    const double lam = eta - 2.0 / 3.0 * mu;
    // S row for u1: (2 mu dux[0] + lam div, mu (duz[0] + dux[2]))
    const double s11 = 2.0 * mu * dux[0] + lam * div;
    const double s13 = mu * (duz[0] + dux[2]);
    const double s21 = mu * dux[1];
    const double s23 = mu * duz[1];
    const double s33 = 2.0 * mu * duz[2] + lam * div;
    fv[0] = s11 * a1 + s13 * a3;
    fv[1] = s21 * a1 + s23 * a3;
    fv[2] = s13 * a1 + s33 * a3;
  };

  const double* U[3] = {sc.u1.data(), sc.u2.data(), sc.u3.data()};

  // vertical faces (constant xi): area (h_face * dsg, 0)
  for (int i = 0; i < nx; ++i) {
    const int im = i - 1;  // ghost column at i = 0
    const int iL = (i - 1 + nx) % nx, iR = i;  // interior accumulation targets
    const double a1 = grid.h_face(i) * dsg;
    const double hbar = 0.5 * (grid.h(iL) + grid.h(i));
    const double dhbar = (grid.h(i) - grid.h(iL)) / dxi;
    for (int k = 0; k < nz; ++k) {
      Flux4 f = rusanov(im, k, i, k, a1, 0.0);
      if (mu > 0 || eta > 0) {
        double dux[3], duz[3];
        const double sg = grid.sigma_center(k);
        for (int c = 0; c < 3; ++c) {
          const double dxiv = (U[c][pidx(nzp, i, k)] - U[c][pidx(nzp, im, k)]) / dxi;
          const double dsgv =
              0.25 * ((U[c][pidx(nzp, im, k + 1)] - U[c][pidx(nzp, im, k - 1)]) +
                      (U[c][pidx(nzp, i, k + 1)] - U[c][pidx(nzp, i, k - 1)])) /
              dsg;
          dux[c] = dxiv - sg * (dhbar / hbar) * dsgv;
          duz[c] = dsgv / hbar;
        }
        double fv[3];
        stress_dot_area(dux, duz, a1, 0.0, fv);
        f.m1 -= fv[0];
        f.m2 -= fv[1];
        f.m3 -= fv[2];
      }
      out.rho(iL, k) += f.rho;
      out.m1(iL, k) += f.m1;
      out.m2(iL, k) += f.m2;
      out.m3(iL, k) += f.m3;
      out.rho(iR, k) -= f.rho;
      out.m1(iR, k) -= f.m1;
      out.m2(iR, k) -= f.m2;
      out.m3(iR, k) -= f.m3;
    }
  }

  // horizontal faces (constant sigma): area (-sigma * dh_flux * dxi, dxi)
  for (int i = 0; i < nx; ++i) {
    const double dhf = grid.dh_flux(i);
    const double hi = grid.h(i), dhi = grid.dh(i);
    for (int k = 0; k <= nz; ++k) {
      const double sgf = grid.sigma_face(k);
      const double a1 = -sgf * dhf * dxi;
      const double a3 = dxi;
      Flux4 f = rusanov(i, k - 1, i, k, a1, a3);
      if (mu > 0 || eta > 0) {
        double dux[3], duz[3];
        for (int c = 0; c < 3; ++c) {
          const double dsgv = (U[c][pidx(nzp, i, k)] - U[c][pidx(nzp, i, k - 1)]) / dsg;
          const double dxiv =
              0.25 * ((U[c][pidx(nzp, i + 1, k - 1)] - U[c][pidx(nzp, i - 1, k - 1)]) +
                      (U[c][pidx(nzp, i + 1, k)] - U[c][pidx(nzp, i - 1, k)])) /
              dxi;
          dux[c] = dxiv - sgf * (dhi / hi) * dsgv;
          duz[c] = dsgv / hi;
        }
        double fv[3];
        stress_dot_area(dux, duz, a1, a3, fv);
        f.m1 -= fv[0];
        f.m2 -= fv[1];
        f.m3 -= fv[2];
      }
      if (k > 0) {
        out.rho(i, k - 1) += f.rho;
        out.m1(i, k - 1) += f.m1;
        out.m2(i, k - 1) += f.m2;
        out.m3(i, k - 1) += f.m3;
      }
      if (k < nz) {
        out.rho(i, k) -= f.rho;
        out.m1(i, k) -= f.m1;
        out.m2(i, k) -= f.m2;
        out.m3(i, k) -= f.m3;
      }
    }
  }

  // net outward flux -> tendency
  for (int i = 0; i < nx; ++i) {
    const double inv = -1.0 / grid.cell_volume(i);
    for (int k = 0; k < nz; ++k) {
      out.rho(i, k) *= inv;
      out.m1(i, k) *= inv;
      out.m2(i, k) *= inv;
      out.m3(i, k) *= inv;
    }
  }
}

Rates rhs(const MappedGrid& grid, const FluidParams& params, const State& state) {
  Rates r(grid.nx(), grid.nz());
  RhsScratch sc;
  rhs(grid, params, state, r, sc);
  return r;
}

double cfl_dt(const MappedGrid& grid, const FluidParams& params, const State& state,
              double cfl) {
  if (!(cfl > 0) || cfl > 0.9)
    throw Error(Errc::InvalidArgument, "cfl must lie in (0, 0.9]");
  const int nx = grid.nx(), nz = grid.nz();
  const double visc = 2.0 * params.mu() + params.eta();
  double dt = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nx; ++i) {
    const double d = std::min(grid.dxi(), grid.h(i) * grid.dsigma());
    for (int k = 0; k < nz; ++k) {
      const double r = state.rho(i, k);
      if (!(r > 0.0))
        throw NonPositiveDensityError(state.t, "non-positive density in cfl_dt");
      const double u1 = state.m1(i, k) / r, u2 = state.m2(i, k) / r,
                   u3 = state.m3(i, k) / r;
      const double sp = std::sqrt(u1 * u1 + u2 * u2 + u3 * u3) + params.sound_speed(r);
      dt = std::min(dt, d / sp);
      if (visc > 0) dt = std::min(dt, 0.5 * d * d * r / visc);
    }
  }
  return cfl * dt;
}

namespace {

void check_positive(const MappedGrid& grid, const Field& rho, double t) {
  for (int i = 0; i < grid.nx(); ++i)
    for (int k = 0; k < grid.nz(); ++k)
      if (!(rho(i, k) > 0.0))
        throw NonPositiveDensityError(
            t, "time step produced non-positive density at t=" + std::to_string(t));
}

}  // namespace

void step(const MappedGrid& grid, const FluidParams& params, State& state, double dt,
          StepScratch& sc) {
  const int nx = grid.nx(), nz = grid.nz();
  if (!sc.stage.rho.same_shape(state.rho)) {
    sc.r1 = Rates(nx, nz);
    sc.r2 = Rates(nx, nz);
    sc.stage = State(nx, nz);
  }
  apply_boundary(grid, state);
  rhs(grid, params, state, sc.r1, sc.prim);

  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      sc.stage.rho(i, k) = state.rho(i, k) + dt * sc.r1.rho(i, k);
      sc.stage.m1(i, k) = state.m1(i, k) + dt * sc.r1.m1(i, k);
      sc.stage.m2(i, k) = state.m2(i, k) + dt * sc.r1.m2(i, k);
      sc.stage.m3(i, k) = state.m3(i, k) + dt * sc.r1.m3(i, k);
    }
  }
  sc.stage.t = state.t + dt;
  check_positive(grid, sc.stage.rho, sc.stage.t);
  apply_boundary(grid, sc.stage);
  rhs(grid, params, sc.stage, sc.r2, sc.prim);

  const double half = 0.5 * dt;
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      state.rho(i, k) += half * (sc.r1.rho(i, k) + sc.r2.rho(i, k));
      state.m1(i, k) += half * (sc.r1.m1(i, k) + sc.r2.m1(i, k));
      state.m2(i, k) += half * (sc.r1.m2(i, k) + sc.r2.m2(i, k));
      state.m3(i, k) += half * (sc.r1.m3(i, k) + sc.r2.m3(i, k));
    }
  }
  state.t += dt;
  check_positive(grid, state.rho, state.t);
  apply_boundary(grid, state);
}

void step(const MappedGrid& grid, const FluidParams& params, State& state, double dt) {
  StepScratch sc;
  step(grid, params, state, dt, sc);
}

double total_mass(const MappedGrid& grid, const State& state) {
  return integrate(grid, state.rho);
}

double max_speed(const MappedGrid& grid, const State& state) {
  double m = 0;
  for (int i = 0; i < grid.nx(); ++i) {
    for (int k = 0; k < grid.nz(); ++k) {
      const double r = state.rho(i, k);
      const double u1 = state.m1(i, k) / r, u2 = state.m2(i, k) / r,
                   u3 = state.m3(i, k) / r;
      m = std::max(m, std::sqrt(u1 * u1 + u2 * u2 + u3 * u3));
    }
  }
  return m;
}

}  // namespace rugose
