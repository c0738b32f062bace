#pragma once

#include <iostream>

namespace viscowave::cli {

enum ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kRuntime = 2,
  kAcceptance = 3,
};

/// Entry point of the `viscowave` tool; JSON and tables go to `out`, diagnostics to `err`.
int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace viscowave::cli
