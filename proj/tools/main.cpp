#include <iostream>

#include "scdr/cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return scdr::cli::run(args, std::cout, std::cerr);
}
