#pragma once

#include <iosfwd>

namespace dealersim {

/// Process exit codes of the `dealersim` tool.
enum class ExitCode : int {
    ok = 0,
    domain_error = 1,  // invalid configuration, insufficient history, stall...
    usage_error = 2,   // unknown subcommand or flag, missing required option
    io_error = 3,      // unreadable input, unwritable output, malformed file
    partial_sweep = 4, // sweep finished but at least one row is flagged
};

/// Entry point of the command-line tool; `out` and `err` receive all output.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dealersim
