#include <iostream>

#include "esg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return esg::cli::run(args, std::cout, std::cerr);
}
