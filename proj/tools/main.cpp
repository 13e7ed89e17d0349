#include "deltagraph/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return deltagraph::run_cli(argc, argv, std::cout, std::cerr);
}
