#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmono {

enum ExitCode : int {
    kExitOk = 0,
    kExitInput = 2,
    kExitValidation = 3,
    kExitViolation = 4,
};

/// Runs one CLI invocation. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace qmono
