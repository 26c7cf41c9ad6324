#pragma once

// The `brepforge` command line: gen, validate, stats, points, defect, eval.

#include <ostream>
#include <string>
#include <vector>

namespace brepforge::cli {

inline constexpr int kExitOk = 0;
/// Invalid data found by validate, or a dataset with nothing to report.
inline constexpr int kExitFailure = 1;
/// Bad flags, bad configuration or an unreadable/unwritable path.
inline constexpr int kExitUsage = 2;

inline constexpr const char* kVersion = "1.0.0";

/// Runs one command; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace brepforge::cli
