#include <string>
#include <vector>

#include "arena/cli/cli.hpp"

int main(int argc, char** argv) {
  return arena::cli::run(std::vector<std::string>(argv, argv + argc));
}
