#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qpc::cli {

// Runs the qpcsteg command line against the given streams and returns the
// process exit code. args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run_main(int argc, char** argv);

} // namespace qpc::cli
