#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace washtrace::cli {

enum exit_code : int {
    ok = 0,
    usage = 1,
    io = 2,
    data = 3,
};

// Runs the washtrace command line. args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace washtrace::cli
