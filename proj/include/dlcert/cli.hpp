#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dlcert::cli {

enum ExitCode : int { kOk = 0, kViolation = 1, kUnknown = 2, kUsage = 3 };

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlcert::cli
