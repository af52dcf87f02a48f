#pragma once

#include <ostream>

namespace ncstokes {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    kExitOk = 0,
    kExitNumerical = 2,
    kExitConfig = 3,
    kExitIo = 4,
};

/// Entry point of the `ncstokes` tool: subcommands convergence, solve and
/// infsup. Tables go to `out` (or to --out), diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace ncstokes
