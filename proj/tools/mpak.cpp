#include <iostream>
#include <string>
#include <vector>

#include "mpak/cli/app.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return mpak::cli::run(args, std::cout, std::cerr);
}
