#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace spiky {

// Runs the command-line tool in-process.  `args` excludes the program name and
// is in natural order.  Returns the process exit code:
//   0 success, 1 usage error, 2 data error, 3 numeric error.
int run_cli(std::vector<std::string> args, std::ostream& out = std::cout,
            std::ostream& err = std::cerr);

}  // namespace spiky
