#include <iostream>

#include "nullflow/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nullflow::run_cli(args, std::cout, std::cerr);
}
