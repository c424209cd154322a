#include "rugose/bogovskii.hpp"

#include <algorithm>
#include <cmath>

namespace rugose {

namespace {

// Gradient-sample enumeration. Each sample is a linear functional of the
// staggered DOFs with a quadrature weight; the energy is
//   v^T A v = sum over samples of w * (sample value)^2
// so A assembled through these callbacks is symmetric positive definite by
// construction. Callback signature: f(kind, index, coeff) with kind 0 = v1,
// kind 1 = v3.
class Ops {
 public:
  explicit Ops(const MappedGrid& g)
      : grid_(g), nx_(g.nx()), nz_(g.nz()), dxi_(g.dxi()), dsg_(g.dsigma()) {}

  int nx() const { return nx_; }
  int nz() const { return nz_; }

  int iv1(int f, int k) const { return ((f % nx_ + nx_) % nx_) * nz_ + k; }
  int iv3(int i, int j) const { return ((i % nx_ + nx_) % nx_) * (nz_ - 1) + (j - 1); }

  // compact sigma-difference of v1 at face column f, sigma node j in [0, nz]
  // (half-cell one-sided differences against the wall value 0)
  template <class F>
  void d_v1(int f, int j, double mult, F&& fn) const {
    if (j == 0) {
      fn(0, iv1(f, 0), mult * 2.0 / dsg_);
    } else if (j == nz_) {
      fn(0, iv1(f, nz_ - 1), -mult * 2.0 / dsg_);
    } else {
      fn(0, iv1(f, j), mult / dsg_);
      fn(0, iv1(f, j - 1), -mult / dsg_);
    }
  }

  // compact sigma-difference of v3 at cell (i,k); wall faces contribute 0
  template <class F>
  void c_v3(int i, int k, double mult, F&& fn) const {
    if (k + 1 < nz_) fn(1, iv3(i, k + 1), mult / dsg_);
    if (k > 0) fn(1, iv3(i, k), -mult / dsg_);
  }

  // (s1) d v1 / dx at cell center (i,k)
  template <class F>
  void s1(int i, int k, F&& fn) const {
    const int ip = (i + 1) % nx_;
    fn(0, iv1(ip, k), 1.0 / dxi_);
    fn(0, iv1(i, k), -1.0 / dxi_);
    const double c = -grid_.sigma_center(k) * (grid_.dh(i) / grid_.h(i)) * 0.25;
    d_v1(i, k, c, fn);
    d_v1(i, k + 1, c, fn);
    d_v1(ip, k, c, fn);
    d_v1(ip, k + 1, c, fn);
  }
  double s1_weight(int i) const { return grid_.h(i) * dxi_ * dsg_; }

  // (s2) d v1 / dz at face column f, sigma node j in [0, nz]
  template <class F>
  void s2(int f, int j, F&& fn) const {
    d_v1(f, j, 1.0 / grid_.h_face(f), fn);
  }
  double s2_weight(int f, int j) const {
    const double frac = (j == 0 || j == nz_) ? 0.5 : 1.0;
    return grid_.h_face(f) * dxi_ * dsg_ * frac;
  }

  // (s3) d v3 / dz at cell center (i,k)
  template <class F>
  void s3(int i, int k, F&& fn) const {
    c_v3(i, k, 1.0 / grid_.h(i), fn);
  }
  double s3_weight(int i) const { return grid_.h(i) * dxi_ * dsg_; }

  // (s4) d v3 / dx at face column f, interior sigma node j in [1, nz-1]
  template <class F>
  void s4(int f, int j, F&& fn) const {
    const int im = (f - 1 + nx_) % nx_;
    fn(1, iv3(f, j), 1.0 / dxi_);
    fn(1, iv3(im, j), -1.0 / dxi_);
    const double hf = grid_.h_face(f);
    const double dhf = (grid_.h(f) - grid_.h(im)) / dxi_;
    const double c = -grid_.sigma_face(j) * (dhf / hf) * 0.25;
    c_v3(im, j - 1, c, fn);
    c_v3(im, j, c, fn);
    c_v3(f, j - 1, c, fn);
    c_v3(f, j, c, fn);
  }
  double s4_weight(int f) const { return grid_.h_face(f) * dxi_ * dsg_; }

  double value(const StagVel& v, int kind, int idx) const {
    return kind == 0 ? v.v1[idx] : v.v3[idx];
  }

  template <class Fn>
  double eval(const StagVel& v, Fn&& enumerate) const {
    double s = 0;
    enumerate([&](int kind, int idx, double c) { s += c * value(v, kind, idx); });
    return s;
  }

 private:
  const MappedGrid& grid_;
  int nx_, nz_;
  double dxi_, dsg_;
};

void scatter_add(StagVel& out, int kind, int idx, double val) {
  (kind == 0 ? out.v1[idx] : out.v3[idx]) += val;
}

}  // namespace

BogovskiiProblem::BogovskiiProblem(const MappedGrid& grid_in, const Field& g_in,
                                   double tol, int max_it)
    : grid(&grid_in), tolerance(tol), max_iterations(max_it) {
  if (!(tol > 0)) throw Error(Errc::InvalidArgument, "tolerance must be > 0");
  if (max_it < 1) throw Error(Errc::InvalidArgument, "max_iterations must be >= 1");
  const int nx = grid_in.nx(), nz = grid_in.nz();
  g.resize(static_cast<size_t>(nx) * nz);
  double wsum = 0, gsum = 0;
  for (int i = 0; i < nx; ++i) {
    const double w = grid_in.cell_volume(i);
    for (int k = 0; k < nz; ++k) {
      g[i * nz + k] = g_in(i, k);
      wsum += w;
      gsum += w * g_in(i, k);
    }
  }
  const double mean = gsum / wsum;
  for (double& x : g) x -= mean;
}

std::vector<double> bogovskii_divergence(const MappedGrid& grid, const StagVel& v) {
  const Ops ops(grid);
  const int nx = ops.nx(), nz = ops.nz();
  std::vector<double> div(static_cast<size_t>(nx) * nz, 0.0);
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k)
      div[i * nz + k] = ops.eval(v, [&](auto&& f) { ops.s1(i, k, f); }) +
                        ops.eval(v, [&](auto&& f) { ops.s3(i, k, f); });
  return div;
}

StagVel bogovskii_div_adjoint_weighted(const MappedGrid& grid,
                                       const std::vector<double>& lambda) {
  const Ops ops(grid);
  const int nx = ops.nx(), nz = ops.nz();
  StagVel out(nx, nz);
  for (int i = 0; i < nx; ++i) {
    const double w = grid.cell_volume(i);
    for (int k = 0; k < nz; ++k) {
      const double f = w * lambda[i * nz + k];
      if (f == 0.0) continue;
      auto add = [&](int kind, int idx, double c) { scatter_add(out, kind, idx, f * c); };
      ops.s1(i, k, add);
      ops.s3(i, k, add);
    }
  }
  return out;
}

StagVel bogovskii_energy_matvec(const MappedGrid& grid, const StagVel& v) {
  const Ops ops(grid);
  const int nx = ops.nx(), nz = ops.nz();
  StagVel out(nx, nz);
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      const double w1 = ops.s1_weight(i);
      const double val1 = ops.eval(v, [&](auto&& f) { ops.s1(i, k, f); });
      auto add1 = [&](int kind, int idx, double c) {
        scatter_add(out, kind, idx, w1 * val1 * c);
      };
      ops.s1(i, k, add1);

      const double w3 = ops.s3_weight(i);
      const double val3 = ops.eval(v, [&](auto&& f) { ops.s3(i, k, f); });
      auto add3 = [&](int kind, int idx, double c) {
        scatter_add(out, kind, idx, w3 * val3 * c);
      };
      ops.s3(i, k, add3);
    }
    for (int j = 0; j <= nz; ++j) {
      const double w2 = ops.s2_weight(i, j);
      const double val2 = ops.eval(v, [&](auto&& f) { ops.s2(i, j, f); });
      auto add2 = [&](int kind, int idx, double c) {
        scatter_add(out, kind, idx, w2 * val2 * c);
      };
      ops.s2(i, j, add2);
    }
    for (int j = 1; j < nz; ++j) {
      const double w4 = ops.s4_weight(i);
      const double val4 = ops.eval(v, [&](auto&& f) { ops.s4(i, j, f); });
      auto add4 = [&](int kind, int idx, double c) {
        scatter_add(out, kind, idx, w4 * val4 * c);
      };
      ops.s4(i, j, add4);
    }
  }
  return out;
}

std::vector<double> bogovskii_cell_weights(const MappedGrid& grid) {
  const int nx = grid.nx(), nz = grid.nz();
  std::vector<double> w(static_cast<size_t>(nx) * nz);
  for (int i = 0; i < nx; ++i)
    for (int k = 0; k < nz; ++k) w[i * nz + k] = grid.cell_volume(i);
  return w;
}

double bogovskii_energy(const MappedGrid& grid, const StagVel& v) {
  const Ops ops(grid);
  const int nx = ops.nx(), nz = ops.nz();
  double e = 0;
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      const double a = ops.eval(v, [&](auto&& f) { ops.s1(i, k, f); });
      const double b = ops.eval(v, [&](auto&& f) { ops.s3(i, k, f); });
      e += ops.s1_weight(i) * a * a + ops.s3_weight(i) * b * b;
    }
    for (int j = 0; j <= nz; ++j) {
      const double a = ops.eval(v, [&](auto&& f) { ops.s2(i, j, f); });
      e += ops.s2_weight(i, j) * a * a;
    }
    for (int j = 1; j < nz; ++j) {
      const double a = ops.eval(v, [&](auto&& f) { ops.s4(i, j, f); });
      e += ops.s4_weight(i) * a * a;
    }
  }
  return e;
}

double bogovskii_l2_sq(const MappedGrid& grid, const StagVel& v) {
  const int nx = grid.nx(), nz = grid.nz();
  const double dv = grid.dxi() * grid.dsigma();
  double s = 0;
  for (int f = 0; f < nx; ++f) {
    const double w = grid.h_face(f) * dv;
    for (int k = 0; k < nz; ++k) {
      const double x = v.v1[f * nz + k];
      s += w * x * x;
    }
  }
  for (int i = 0; i < nx; ++i) {
    const double w = grid.h(i) * dv;
    for (int j = 1; j < nz; ++j) {
      const double x = v.v3[i * (nz - 1) + (j - 1)];
      s += w * x * x;
    }
  }
  return s;
}

double bogovskii_w12_norm(const MappedGrid& grid, const StagVel& v) {
  return std::sqrt(bogovskii_l2_sq(grid, v) + bogovskii_energy(grid, v));
}

Velocity bogovskii_to_velocity(const MappedGrid& grid, const StagVel& v) {
  const int nx = grid.nx(), nz = grid.nz();
  Velocity out(nx, nz);
  for (int i = 0; i < nx; ++i) {
    const int ip = (i + 1) % nx;
    for (int k = 0; k < nz; ++k) {
      out.u1(i, k) = 0.5 * (v.v1[i * nz + k] + v.v1[ip * nz + k]);
      const double lo = (k > 0) ? v.v3[i * (nz - 1) + (k - 1)] : 0.0;
      const double hi = (k + 1 < nz) ? v.v3[i * (nz - 1) + k] : 0.0;
      out.u3(i, k) = 0.5 * (lo + hi);
    }
  }
  return out;
}

namespace {

// Jacobi diagonal of A.
std::vector<double> energy_diagonal(const MappedGrid& grid) {
  const Ops ops(grid);
  const int nx = ops.nx(), nz = ops.nz();
  StagVel tmp(nx, nz);
  std::vector<double> diag(tmp.size(), 0.0);
  auto slot = [&](int kind, int idx) -> double& {
    return kind == 0 ? diag[idx] : diag[tmp.v1.size() + idx];
  };
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nz; ++k) {
      auto add1 = [&](int kind, int idx, double c) { slot(kind, idx) += ops.s1_weight(i) * c * c; };
      ops.s1(i, k, add1);
      auto add3 = [&](int kind, int idx, double c) { slot(kind, idx) += ops.s3_weight(i) * c * c; };
      ops.s3(i, k, add3);
    }
    for (int j = 0; j <= nz; ++j) {
      auto add2 = [&](int kind, int idx, double c) { slot(kind, idx) += ops.s2_weight(i, j) * c * c; };
      ops.s2(i, j, add2);
    }
    for (int j = 1; j < nz; ++j) {
      auto add4 = [&](int kind, int idx, double c) { slot(kind, idx) += ops.s4_weight(i) * c * c; };
      ops.s4(i, j, add4);
    }
  }
  return diag;
}

double dot_stag(const StagVel& a, const StagVel& b) {
  double s = 0;
  for (size_t j = 0; j < a.v1.size(); ++j) s += a.v1[j] * b.v1[j];
  for (size_t j = 0; j < a.v3.size(); ++j) s += a.v3[j] * b.v3[j];
  return s;
}

void axpy_stag(StagVel& y, double alpha, const StagVel& x) {
  for (size_t j = 0; j < y.v1.size(); ++j) y.v1[j] += alpha * x.v1[j];
  for (size_t j = 0; j < y.v3.size(); ++j) y.v3[j] += alpha * x.v3[j];
}

// CG with Jacobi preconditioning for A q = b.
StagVel solve_energy_system(const MappedGrid& grid, const StagVel& b,
                            const std::vector<double>& diag, double rel_tol,
                            int max_iter) {
  const int nx = grid.nx(), nz = grid.nz();
  StagVel q(nx, nz);
  StagVel r = b;
  const double bnorm = std::sqrt(dot_stag(b, b));
  if (bnorm == 0.0) return q;
  const double target = rel_tol * bnorm;

  auto precond = [&](const StagVel& in) {
    StagVel out(nx, nz);
    for (size_t j = 0; j < in.v1.size(); ++j) out.v1[j] = in.v1[j] / diag[j];
    for (size_t j = 0; j < in.v3.size(); ++j)
      out.v3[j] = in.v3[j] / diag[in.v1.size() + j];
    return out;
  };

  StagVel z = precond(r);
  StagVel p = z;
  double rz = dot_stag(r, z);
  for (int it = 0; it < max_iter; ++it) {
    const StagVel ap = bogovskii_energy_matvec(grid, p);
    const double alpha = rz / dot_stag(p, ap);
    axpy_stag(q, alpha, p);
    axpy_stag(r, -alpha, ap);
    if (std::sqrt(dot_stag(r, r)) <= target) return q;
    z = precond(r);
    const double rz_new = dot_stag(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t j = 0; j < p.v1.size(); ++j) p.v1[j] = z.v1[j] + beta * p.v1[j];
    for (size_t j = 0; j < p.v3.size(); ++j) p.v3[j] = z.v3[j] + beta * p.v3[j];
  }
  throw NoConvergenceError(max_iter, std::sqrt(dot_stag(r, r)) / bnorm,
                           "inner vector-Poisson CG did not converge");
}

}  // namespace

BogovskiiSolution bogovskii_solve(const BogovskiiProblem& problem) {
  const MappedGrid& grid = *problem.grid;
  const int nx = grid.nx(), nz = grid.nz();
  const size_t ncell = problem.g.size();
  const std::vector<double> w = bogovskii_cell_weights(grid);
  const std::vector<double> diag = energy_diagonal(grid);
  const int inner_max = 200 * (nx + nz) + 2000;

  auto wdot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t j = 0; j < ncell; ++j) s += w[j] * a[j] * b[j];
    return s;
  };
  auto project_mean = [&](std::vector<double>& a) {
    double ws = 0, s = 0;
    for (size_t j = 0; j < ncell; ++j) {
      ws += w[j];
      s += w[j] * a[j];
    }
    const double mean = s / ws;
    for (double& x : a) x -= mean;
  };

  BogovskiiSolution sol;
  sol.v = StagVel(nx, nz);

  // Schur system S lambda = -g with S = B A^{-1} B^T W; CG in the
  // volume-weighted inner product. The CG residual equals div v - g.
  std::vector<double> r(ncell);
  for (size_t j = 0; j < ncell; ++j) r[j] = -problem.g[j];
  project_mean(r);
  sol.residual = std::sqrt(wdot(r, r));
  if (sol.residual <= problem.tolerance) return sol;  // g == 0 -> v == 0

  std::vector<double> z = r, p = r;
  double rz = wdot(r, r);
  for (int it = 1; it <= problem.max_iterations; ++it) {
    const StagVel btw = bogovskii_div_adjoint_weighted(grid, p);
    const StagVel q = solve_energy_system(grid, btw, diag, 1e-12, inner_max);
    std::vector<double> sp = bogovskii_divergence(grid, q);
    project_mean(sp);
    const double psp = wdot(p, sp);
    const double alpha = rz / psp;
    axpy_stag(sol.v, -alpha, q);
    for (size_t j = 0; j < ncell; ++j) r[j] -= alpha * sp[j];
    project_mean(r);

    if (it % 25 == 0) {
      // refresh against inner-solve drift
      std::vector<double> div = bogovskii_divergence(grid, sol.v);
      for (size_t j = 0; j < ncell; ++j) r[j] = div[j] - problem.g[j];
      project_mean(r);
    }
    sol.residual = std::sqrt(wdot(r, r));
    sol.iterations = it;
    if (sol.residual <= problem.tolerance) return sol;

    const double rz_new = wdot(r, r);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t j = 0; j < ncell; ++j) p[j] = r[j] + beta * p[j];
  }
  throw NoConvergenceError(problem.max_iterations, sol.residual,
                           "Uzawa iteration did not reach the divergence tolerance");
}

BogovskiiSweepResult bogovskii_norm_sweep(const RoughProfile& profile,
                                          const std::vector<double>& epsilons,
                                          const BogovskiiSweepOptions& opts) {
  // smooth test family, mean-corrected on the grid cells
  struct GMode {
    int jx, jz;
  };
  const GMode modes[] = {{1, 1}, {2, 1}, {1, 2}};

  BogovskiiSweepResult out;
  for (double eps : epsilons) {
    const DomainSpec spec = make_domain_spec(profile, eps);
    const int nx = static_cast<int>(std::lround(opts.cells_per_period / eps));
    const MappedGrid grid = build_grid(spec, nx, opts.nz);
    double n_eps = 0;
    bool ok = true;
    for (int gi = 0; gi < 3; ++gi) {
      BogovskiiSweepRow row;
      row.epsilon = eps;
      row.g_id = gi;
      Field g(nx, opts.nz);
      for (int i = 0; i < nx; ++i)
        for (int k = 0; k < opts.nz; ++k)
          g(i, k) = std::sin(2.0 * M_PI * modes[gi].jx * grid.x_center(i)) *
                    std::sin(M_PI * modes[gi].jz * grid.sigma_center(k));
      double gnorm = 0;
      for (int i = 0; i < nx; ++i)
        for (int k = 0; k < opts.nz; ++k)
          gnorm += grid.cell_volume(i) * g(i, k) * g(i, k);
      gnorm = std::sqrt(gnorm);
      try {
        BogovskiiProblem problem(grid, g, opts.rel_tolerance * gnorm,
                                 opts.max_iterations);
        const BogovskiiSolution sol = bogovskii_solve(problem);
        row.norm_ratio = bogovskii_w12_norm(grid, sol.v) / gnorm;
        row.iterations = sol.iterations;
        row.residual = sol.residual;
        row.status = "ok";
        n_eps = std::max(n_eps, row.norm_ratio);
      } catch (const Error& e) {
        row.status = e.what();
        ok = false;
      }
      out.rows.push_back(row);
    }
    out.n_eps.push_back(ok ? n_eps : 0.0);
  }
  double lo = 0, hi = 0;
  for (double n : out.n_eps) {
    if (n <= 0) continue;
    if (lo == 0 || n < lo) lo = n;
    hi = std::max(hi, n);
  }
  out.max_over_min = (lo > 0) ? hi / lo : 0.0;
  return out;
}

}  // namespace rugose
