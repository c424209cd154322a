#include "rugose/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace rugose {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double wrap01(double y) {
  double r = y - std::floor(y);
  return (r >= 1.0) ? r - 1.0 : r;
}

// Uniform cubic B-spline basis on [0,1), weights for control points j-1..j+2.
void bspline_weights(double u, double w[4]) {
  const double u2 = u * u, u3 = u2 * u;
  w[0] = (1 - 3 * u + 3 * u2 - u3) / 6.0;
  w[1] = (4 - 6 * u2 + 3 * u3) / 6.0;
  w[2] = (1 + 3 * u + 3 * u2 - 3 * u3) / 6.0;
  w[3] = u3 / 6.0;
}

void bspline_dweights(double u, double w[4]) {
  const double u2 = u * u;
  w[0] = (-3 + 6 * u - 3 * u2) / 6.0;
  w[1] = (-12 * u + 9 * u2) / 6.0;
  w[2] = (3 + 6 * u - 9 * u2) / 6.0;
  w[3] = 3 * u2 / 6.0;
}

// Solves the cyclic tridiagonal system (c[i-1] + 4 c[i] + c[i+1])/6 = f[i]
// via Sherman-Morrison on top of the Thomas algorithm.
std::vector<double> bspline_prefilter(const std::vector<double>& f) {
  const int n = static_cast<int>(f.size());
  if (n == 1) return {f[0]};
  const double a = 1.0 / 6.0, b = 4.0 / 6.0;

  auto thomas = [&](std::vector<double> d, std::vector<double> rhs) {
    std::vector<double> x(n);
    for (int i = 1; i < n; ++i) {
      double m = a / d[i - 1];
      d[i] -= m * a;
      rhs[i] -= m * rhs[i - 1];
    }
    x[n - 1] = rhs[n - 1] / d[n - 1];
    for (int i = n - 2; i >= 0; --i) x[i] = (rhs[i] - a * x[i + 1]) / d[i];
    return x;
  };

  // Cyclic correction: A = T + u v^T with u = gamma e0 + a e_{n-1} ... use the
  // standard choice gamma = -b.
  const double gamma = -b;
  std::vector<double> d(n, b);
  d[0] = b - gamma;
  d[n - 1] = b - a * a / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = a;

  std::vector<double> y = thomas(d, f);
  std::vector<double> q = thomas(d, u);
  double vy = y[0] + (a / gamma) * y[n - 1];
  double vq = 1.0 + q[0] + (a / gamma) * q[n - 1];
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = y[i] - q[i] * (vy / vq);
  return x;
}

}  // namespace

double RoughProfile::value(Vec2 y) const {
  const double r1 = wrap01(y.x), r2 = wrap01(y.y);
  switch (kind_) {
    case ProfileKind::Flat:
      return c0_;
    case ProfileKind::Riblet:
      return c0_ + c1_ * std::sin(kTwoPi * r1);
    case ProfileKind::EggCarton:
      return c0_ + c1_ * std::sin(kTwoPi * r1) + c2_ * std::sin(kTwoPi * r2);
    case ProfileKind::Tabulated: {
      const int n = table_n_;
      const double t1 = r1 * n, t2 = r2 * n;
      const int j1 = std::min(static_cast<int>(t1), n - 1);
      const int j2 = std::min(static_cast<int>(t2), n - 1);
      double w1[4], w2[4];
      bspline_weights(t1 - j1, w1);
      bspline_weights(t2 - j2, w2);
      double v = 0;
      for (int b = 0; b < 4; ++b) {
        const int jb = (j2 + b - 1 + n) % n;
        double row = 0;
        for (int a = 0; a < 4; ++a) {
          const int ja = (j1 + a - 1 + n) % n;
          row += w1[a] * coeff_[ja * n + jb];
        }
        v += w2[b] * row;
      }
      return v;
    }
  }
  return c0_;
}

Vec2 RoughProfile::gradient(Vec2 y) const {
  const double r1 = wrap01(y.x), r2 = wrap01(y.y);
  switch (kind_) {
    case ProfileKind::Flat:
      return {0, 0};
    case ProfileKind::Riblet:
      return {c1_ * kTwoPi * std::cos(kTwoPi * r1), 0};
    case ProfileKind::EggCarton:
      return {c1_ * kTwoPi * std::cos(kTwoPi * r1), c2_ * kTwoPi * std::cos(kTwoPi * r2)};
    case ProfileKind::Tabulated: {
      const int n = table_n_;
      const double t1 = r1 * n, t2 = r2 * n;
      const int j1 = std::min(static_cast<int>(t1), n - 1);
      const int j2 = std::min(static_cast<int>(t2), n - 1);
      double w1[4], w2[4], d1[4], d2[4];
      bspline_weights(t1 - j1, w1);
      bspline_weights(t2 - j2, w2);
      bspline_dweights(t1 - j1, d1);
      bspline_dweights(t2 - j2, d2);
      double gx = 0, gy = 0;
      for (int b = 0; b < 4; ++b) {
        const int jb = (j2 + b - 1 + n) % n;
        double rw = 0, rd = 0;
        for (int a = 0; a < 4; ++a) {
          const int ja = (j1 + a - 1 + n) % n;
          const double c = coeff_[ja * n + jb];
          rw += w1[a] * c;
          rd += d1[a] * c;
        }
        gx += w2[b] * rd;
        gy += d2[b] * rw;
      }
      // d/dy = n * d/dt
      return {gx * n, gy * n};
    }
  }
  return {0, 0};
}

void RoughProfile::finalize_samples() {
  // Dense midpoint sweep of the unit cell: Lipschitz constant, sup, min.
  const int n = 512;
  double lip = 0, sup = -1e300, mn = 1e300, ssup = -1e300;
  const bool flat2 = (kind_ != ProfileKind::EggCarton && kind_ != ProfileKind::Tabulated);
  const int n2 = flat2 ? 1 : n;  // 1D kinds need no y2 sweep
  for (int i = 0; i < n; ++i) {
    const double y1 = (i + 0.5) / n;
    for (int j = 0; j < n2; ++j) {
      const double y2 = (j + 0.5) / n;
      const double v = value({y1, y2});
      const Vec2 g = gradient({y1, y2});
      lip = std::max(lip, norm(g));
      sup = std::max(sup, v);
      mn = std::min(mn, v);
    }
    ssup = std::max(ssup, value({y1, 0.0}));
  }
  lipschitz_ = lip;
  sup_ = sup;
  min_ = mn;
  slice_sup_ = ssup;
  if (min_ <= 0.0)
    throw Error(Errc::NonPositiveProfile, "profile is not strictly positive on the unit cell");
}

RoughProfile make_profile(ProfileKind kind, double c0, double c1, double c2) {
  if (kind == ProfileKind::Tabulated)
    throw Error(Errc::InvalidArgument, "use make_tabulated_profile for tabulated profiles");
  // fast reject; the binding check is the sampled minimum in finalize_samples
  if (c0 < std::abs(c1) + std::abs(c2))
    throw Error(Errc::NonPositiveProfile,
                "profile positivity requires c0 >= |c1| + |c2|");
  RoughProfile p;
  p.kind_ = kind;
  p.c0_ = c0;
  p.c1_ = (kind == ProfileKind::Flat) ? 0.0 : c1;
  p.c2_ = (kind == ProfileKind::EggCarton) ? c2 : 0.0;
  p.finalize_samples();
  return p;
}

RoughProfile make_tabulated_profile(const std::vector<std::vector<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 4) throw Error(Errc::InvalidArgument, "tabulated profile needs at least 4x4 samples");
  for (const auto& row : samples)
    if (static_cast<int>(row.size()) != n)
      throw Error(Errc::InvalidArgument, "tabulated profile must be square (n x n)");

  RoughProfile p;
  p.kind_ = ProfileKind::Tabulated;
  p.table_n_ = n;
  // Prefilter rows then columns so the spline interpolates the samples.
  std::vector<double> tmp(n * n);
  for (int i = 0; i < n; ++i) {
    std::vector<double> row = samples[i];
    row = bspline_prefilter(row);
    for (int j = 0; j < n; ++j) tmp[i * n + j] = row[j];
  }
  p.coeff_.resize(n * n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> col(n);
    for (int i = 0; i < n; ++i) col[i] = tmp[i * n + j];
    col = bspline_prefilter(col);
    for (int i = 0; i < n; ++i) p.coeff_[i * n + j] = col[i];
  }
  p.finalize_samples();
  return p;
}

DomainSpec make_domain_spec(RoughProfile profile, double epsilon, DomainMode mode) {
  if (!(epsilon > 0.0) || epsilon > 1.0)
    throw Error(Errc::InvalidEpsilon, "epsilon must satisfy 0 < eps <= 1");
  const double inv = 1.0 / epsilon;
  if (std::abs(inv - std::lround(inv)) > 1e-9 * inv)
    throw Error(Errc::InvalidEpsilon,
                "epsilon must be the reciprocal of a positive integer");
  DomainSpec s;
  s.epsilon = epsilon;
  s.profile = std::move(profile);
  s.mode = mode;
  return s;
}

double eval_height(const DomainSpec& spec, Vec2 x) {
  return 1.0 + spec.epsilon * spec.profile.value({x.x / spec.epsilon, x.y / spec.epsilon});
}

Vec3 boundary_normal(const DomainSpec& spec, Vec2 x) {
  const Vec2 g = spec.profile.gradient({x.x / spec.epsilon, x.y / spec.epsilon});
  const double s = std::sqrt(1.0 + g.x * g.x + g.y * g.y);
  return {-g.x / s, -g.y / s, 1.0 / s};
}

RugosityMoments rugosity_moments(const RoughProfile& profile, int n_per_axis) {
  if (n_per_axis < 64)
    throw Error(Errc::InvalidArgument, "rugosity_moments needs >= 64 samples per period");
  const int n = n_per_axis;
  RugosityMoments m;
  double s1 = 0, s2 = 0, m11 = 0, m12 = 0, m22 = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 g = profile.gradient({(i + 0.5) / n, (j + 0.5) / n});
      s1 += g.x;
      s2 += g.y;
      m11 += g.x * g.x;
      m12 += g.x * g.y;
      m22 += g.y * g.y;
    }
  }
  const double inv = 1.0 / (static_cast<double>(n) * n);
  m.mean = {s1 * inv, s2 * inv};
  m.m11 = m11 * inv;
  m.m12 = m12 * inv;
  m.m22 = m22 * inv;

  const double tr = m.m11 + m.m22;
  const double tol = 1e-8 * tr;
  if (!(tr > 0)) {
    m.rank = 0;
    return m;
  }
  // Eigenvalues of the symmetric 2x2 second-moment matrix.
  const double half = 0.5 * (m.m11 + m.m22);
  const double disc = std::sqrt(std::max(0.0, 0.25 * (m.m11 - m.m22) * (m.m11 - m.m22) + m.m12 * m.m12));
  const double lam_max = half + disc, lam_min = half - disc;
  m.rank = (lam_max > tol ? 1 : 0) + (lam_min > tol ? 1 : 0);
  if (m.rank == 1) {
    // Null eigenvector (the invariant direction).
    Vec2 v;
    if (std::abs(m.m12) <= tol) {
      v = (m.m11 <= m.m22) ? Vec2{1, 0} : Vec2{0, 1};
    } else {
      v = {m.m12, lam_min - m.m11};
      const double nv = norm(v);
      v = {v.x / nv, v.y / nv};
    }
    // canonical sign: first nonzero component positive
    if (v.x < 0 || (v.x == 0 && v.y < 0)) v = {-v.x, -v.y};
    if (std::abs(v.x) < 1e-9) v.x = 0;
    if (std::abs(v.y) < 1e-9) v.y = 0;
    m.null_direction = v;
  }
  return m;
}

RugosityMoments rugosity_moments(const DomainSpec& spec, int n_per_axis) {
  return rugosity_moments(spec.profile, n_per_axis);
}

NondegeneracyResult nondegeneracy_check(const RoughProfile& profile) {
  const RugosityMoments m = rugosity_moments(profile, 256);
  NondegeneracyResult r;
  switch (m.rank) {
    case 0:
      r.kind = Nondegeneracy::Constant;
      break;
    case 1:
      r.kind = Nondegeneracy::DegenerateDirection;
      r.direction = m.null_direction;
      break;
    default:
      r.kind = Nondegeneracy::NonDegenerate;
      break;
  }
  return r;
}

double slice_height(const DomainSpec& spec, double x) {
  return 1.0 + spec.epsilon * spec.profile.value({x / spec.epsilon, 0.0});
}

double slice_slope(const DomainSpec& spec, double x) {
  return spec.profile.gradient({x / spec.epsilon, 0.0}).x;
}

}  // namespace rugose
