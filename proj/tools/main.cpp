#include <iostream>

#include "eonsurv/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return eonsurv::run_cli(args, std::cout, std::cerr);
}
