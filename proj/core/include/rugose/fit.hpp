#pragma once

#include <span>
#include <utility>

#include "rugose/errors.hpp"

namespace rugose {

struct FitResult {
  double slope = 0;
  double intercept = 0;  // of log y vs log x
  double r_squared = 0;
};

/// Least squares on logarithms. Needs >= 3 points, all coordinates positive;
/// throws Error(NonPositiveData) otherwise.
FitResult fit_loglog(std::span<const std::pair<double, double>> points);

}  // namespace rugose
