#include <iostream>
#include <string>
#include <vector>

#include "brepforge/cli.hpp"

int main(int argc, char** argv) {
  return brepforge::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
