#include <iostream>
#include <string>
#include <vector>

#include "kats/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kats::run_command(std::move(args), std::cout, std::cerr);
}
