#include <iostream>
#include <string>
#include <vector>

#include "bwgen/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bwgen::cli::run_cli(args, std::cout, std::cerr);
}
