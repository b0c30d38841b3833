#pragma once

#include <iosfwd>

namespace pcpnet {

// Full command-line front end as a library function so tests can drive it
// in-process. `in` backs FILE arguments given as "-"; normal results go to
// `out`, diagnostics to `err`. Returns the process exit code:
//   0 success, 1 usage error, 2 parse/semantic error, 3 size guard exceeded.
int run_cli(int argc, const char* const* argv, std::istream& in,
            std::ostream& out, std::ostream& err);

}  // namespace pcpnet
