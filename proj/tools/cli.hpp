#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace simondl::cli {

// args excludes the program name. Returns the process exit code:
// 0 success, 1 engine error (nothing found, inconsistent input), 2 usage error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// SIMONDL_THREADS if set and positive, otherwise the hardware thread count.
int default_threads();

}  // namespace simondl::cli
