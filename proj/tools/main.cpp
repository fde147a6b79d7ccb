#include <string>
#include <vector>

#include "ilab/cli.hpp"

int main(int argc, char** argv) {
  return ilab::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
