#pragma once

#include <string>
#include <vector>

namespace rugose {

/// Entry point behind the `rugose` binary. Subcommands: geom, run, sweep,
/// trace-check, korn-check, bogovskii-check, plot. Exit codes: 0 success,
/// 2 configuration error, 3 numerical failure.
int cli(int argc, const char* const* argv);
int cli(const std::vector<std::string>& args);  // args without argv[0]

}  // namespace rugose
