#include <string>
#include <vector>

#include "npshape/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return npshape::run_cli(std::move(args));
}
