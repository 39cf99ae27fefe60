#include <iostream>
#include <string>
#include <vector>

#include "lpvssa/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return lpvssa::cli::run(args, std::cout, std::cerr);
}
