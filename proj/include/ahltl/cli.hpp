#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ahltl::cli {

inline constexpr int kExitHolds = 0;
inline constexpr int kExitFails = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFragment = 3;
// Also used for INCONCLUSIVE oracle verdicts: the bounds are the exhausted resource.
inline constexpr int kExitResource = 4;

inline constexpr const char* kReportSchema = "ahltl-report/1";

// Runs one command line given without the program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ahltl::cli
