#include <iostream>
#include <string>
#include <vector>

#include "gqr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gqr::cli::run(args, std::cout, std::cerr);
}
