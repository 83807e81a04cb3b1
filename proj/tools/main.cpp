#include <iostream>
#include <string>
#include <vector>

#include "chipencil_cli/commands.hpp"

int main(int argc, char** argv) {
  return chipencil::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
