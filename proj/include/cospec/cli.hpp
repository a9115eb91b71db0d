#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace cospec::cli {

// Full command-line surface: census | switch | canon | enum-ortho | mc |
// tail | codec. `args` excludes the program name. Returns the process exit
// code: 0 on success, 1 on a domain error, 2 on a usage error. All output
// goes to `out`/`err`, so runs are capturable in tests; identical argument
// vectors (and environment) produce byte-identical output.
int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
        std::ostream& err = std::cerr);

}  // namespace cospec::cli
