#include <string>
#include <vector>

#include "speclyap/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return speclyap::run_cli(args);
}
