#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace medcorpus::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

// args[0] is the program name. Normal output goes to `out`, diagnostics and
// help-on-error to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace medcorpus::cli
