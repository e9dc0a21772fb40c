#include <iostream>

#include "ramsey/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ramsey::cli::run(args, std::cout, std::cerr);
}
