#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace tensorpow {

// Full command-line driver, callable in-process for tests.  argv excludes
// the program name.  Returns the process exit code: 0 success, 2 domain
// error, 3 internal invariant violation, 64 usage error.
int run_cli(const std::vector<std::string>& argv, std::ostream& out,
            std::ostream& err);

}  // namespace tensorpow
