#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rugose/fit.hpp"

namespace rugose {

struct SvgAxes {
  std::string title;
  std::string x_label;
  std::string y_label;
  bool loglog = false;
  int width = 640;
  int height = 480;
};

/// Scatter plot (one <circle> per point) with an optional fitted power law /
/// line drawn as a single <path>. Deterministic byte output for fixed input.
/// Throws Error(EmptySeries) on empty input.
std::string svg_scatter(std::span<const std::pair<double, double>> points,
                        const FitResult* fit, const SvgAxes& axes);

/// Line chart: one <polyline> per curve (same length not required).
std::string svg_lines(const std::vector<std::vector<std::pair<double, double>>>& curves,
                      const std::vector<std::string>& labels, const SvgAxes& axes);

}  // namespace rugose
