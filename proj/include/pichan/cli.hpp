#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace pichan {

// Entry point of the `pichan` tool. `args` includes the program name.
// Subcommands: compile, check, run, gen-iface. Returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pichan
