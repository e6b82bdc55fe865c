#include <string>
#include <vector>

#include "gridcop/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gridcop::run_cli(args);
}
