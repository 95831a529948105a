#include <iostream>

#include "pichan/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return pichan::run_cli(args, std::cout, std::cerr);
}
