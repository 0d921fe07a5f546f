#include <iostream>
#include <string>
#include <vector>

#include "qencost/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return qencost::dispatch(args, std::cout, std::cerr);
}
