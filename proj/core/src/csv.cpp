#include "rugose/csv.hpp"

#include <cstdio>

namespace rugose {

std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_num(int v) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%d", v);
  return buf;
}

std::string csv_field(std::string_view s) {
  const bool needs_quote = s.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs_quote) return std::string(s);
  std::string out;
  out.reserve(s.size() + 2);
  out.push_back('"');
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string csv_row(const std::vector<std::string>& fields) {
  std::string out;
  for (size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(',');
    out += fields[i];
  }
  out.push_back('\n');
  return out;
}

}  // namespace rugose
