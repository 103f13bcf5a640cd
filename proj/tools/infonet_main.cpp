#include <iostream>
#include <string>
#include <vector>

#include "infonet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return infonet::cli::run(args, std::cout, std::cerr);
}
