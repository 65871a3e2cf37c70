#include <iostream>

#include "fintopos/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fintopos::run_cli(args, std::cout, std::cerr);
}
