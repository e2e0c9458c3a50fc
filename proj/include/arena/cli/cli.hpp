#pragma once

#include <string>
#include <vector>

namespace arena::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 2,
  kExitEndpoint = 3,
  kExitPartial = 4,
};

/// Entry point of the `arena` tool. args[0] is the program name.
int run(const std::vector<std::string>& args);

}  // namespace arena::cli
