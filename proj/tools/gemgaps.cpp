#include <string>
#include <vector>

#include "gemgaps/cli.hpp"

int main(int argc, char** argv) {
  return gemgaps::cli::execute(std::vector<std::string>(argv, argv + argc));
}
