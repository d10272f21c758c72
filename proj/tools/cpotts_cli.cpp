#include <iostream>

#include "cpotts/cli.hpp"

int main(int argc, char** argv) {
  return cpotts::run_cli(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
