#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace rugose {

/// Deterministic shortest-no-loss formatting (%.17g).
std::string csv_num(double v);
std::string csv_num(int v);

/// RFC-4180 quoting: fields containing comma, quote, CR or LF are quoted,
/// embedded quotes doubled.
std::string csv_field(std::string_view s);

/// Joins pre-formatted fields with commas and a trailing LF.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace rugose
