#pragma once

#include <iosfwd>

namespace lumensep {

/// Command-line entry point. Reports go to `out` as key=value lines, errors to
/// `err`. Returns 0 on success, 2 for bad arguments or preconditions, 3 when
/// the lumens are not separated, 4 for I/O failures.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lumensep
