#include <iostream>
#include <string>
#include <vector>

#include "mmbarrier/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return mmbarrier::run_cli(args, std::cout, std::cerr);
}
