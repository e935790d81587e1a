#pragma once

#include <ostream>

namespace cdl {

/// The command-line front end. Returns the process exit status: 0 when every
/// claim matched, 2 on a mismatch, 1 on usage or config errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cdl
