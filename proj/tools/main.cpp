#include <iostream>
#include <string>
#include <vector>

#include "sheafsym/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sheafsym::cli::run_command(args, std::cout);
}
