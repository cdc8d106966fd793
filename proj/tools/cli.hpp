#pragma once

#include <ostream>

namespace ufi::cli {

/// Runs the `ufi` command line. Returns the process exit code: 0 on success,
/// 1 for data errors, 2 for usage errors.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace ufi::cli
