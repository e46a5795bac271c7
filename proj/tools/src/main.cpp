#include <iostream>

#include "korovkin_cli/cli.hpp"

int main(int argc, char** argv) {
  return korovkin::cli::run_cli(argc, argv, std::cout, std::cerr);
}
