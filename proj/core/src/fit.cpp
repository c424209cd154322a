#include "rugose/fit.hpp"

#include <cmath>

namespace rugose {

FitResult fit_loglog(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    throw Error(Errc::NonPositiveData, "fit_loglog needs at least 3 points");
  const double n = static_cast<double>(points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    if (!(x > 0) || !(y > 0))
      throw Error(Errc::NonPositiveData, "fit_loglog needs strictly positive data");
    const double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0)
    throw Error(Errc::NonPositiveData, "fit_loglog: degenerate abscissae");
  FitResult f;
  f.slope = (n * sxy - sx * sy) / denom;
  f.intercept = (sy - f.slope * sx) / n;

  const double ybar = sy / n;
  double ss_res = 0, ss_tot = 0;
  for (const auto& [x, y] : points) {
    const double ly = std::log(y);
    const double pred = f.intercept + f.slope * std::log(x);
    ss_res += (ly - pred) * (ly - pred);
    ss_tot += (ly - ybar) * (ly - ybar);
  }
  f.r_squared = (ss_tot > 0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  return f;
}

}  // namespace rugose
