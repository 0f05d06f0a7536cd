#pragma once

#include <iosfwd>

namespace minext::cli {

/// Runs the command-line front end. JSON goes to `out`, diagnostics and
/// usage to `err`. Returns 0 on success, 1 on an operational error and 2 on
/// invalid arguments.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace minext::cli
