#include <iostream>

#include "graphmerge/cli.hpp"

int main(int argc, char** argv) {
  return graphmerge::cli::run_cli(argc, argv, std::cout, std::cerr);
}
