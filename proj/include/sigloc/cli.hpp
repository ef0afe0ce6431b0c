#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sigloc::cli {

/// Runs the command line tool; returns the process exit code
/// (0 success, 1 computational failure, 2 configuration error).
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace sigloc::cli
