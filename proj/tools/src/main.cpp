#include <iostream>

#include "finslerlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return finslerlab::cli::run(args, std::cout, std::cerr);
}
