#include <iostream>

#include "zetascope/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return zetascope::cli::run(args, std::cout, std::cerr);
}
