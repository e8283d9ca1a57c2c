#include <iostream>
#include <string>
#include <vector>

#include "cohui/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return cohui::run_cli(args, std::cout, std::cerr);
}
