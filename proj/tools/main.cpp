#include <string>
#include <vector>

#include "liftdd/cli.hpp"

int main(int argc, char** argv) {
  return liftdd::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
