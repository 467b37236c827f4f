#include <iostream>
#include <string>
#include <vector>

#include "fbstab/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return fbstab::cli::run(args, std::cout, std::cerr);
}
