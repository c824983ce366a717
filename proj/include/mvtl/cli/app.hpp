#pragma once

#include <iosfwd>

namespace mvtl::cli {

/// Parses the command line and runs one command.
/// Returns 0 on success, 1 on usage, parse or input errors, 2 when no plan
/// exists and 3 on internal errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mvtl::cli
