#include <iostream>
#include <string>
#include <vector>

#include "umvue/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return umvue::cli::run(args, std::cout, std::cerr);
}
