#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace mubinfo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitExperimentFailed = 1;
inline constexpr int kExitUsage = 2;

/// Full command-line front end. args excludes the program name. Results go
/// to `out` (or --out), diagnostics and the seed echo to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mubinfo
