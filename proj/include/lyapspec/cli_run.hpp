#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lyapspec {

inline constexpr const char* kToolVersion = "lyapspec 0.1.0";

// Runs one CLI invocation (args exclude the program name) and returns the
// process exit code: 0 ok, 1 failure, 2 schema violation, 3 resource cap,
// 4 refused degeneracy.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lyapspec
