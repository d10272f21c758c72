#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cpotts {

enum ExitCode { kExitPass = 0, kExitCheckFailure = 1, kExitConfigError = 2 };

// args excludes the program name; JSON goes to out (or --out FILE), progress to err
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cpotts
