#include <iostream>
#include <string>
#include <vector>

#include "corral/cli.hpp"

auto main(int argc, char** argv) -> int {
  std::vector<std::string> args(argv + 1, argv + argc);
  return corral::run(args, std::cout, std::cerr);
}
