#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return annulus::cli::main_entry(argc, argv, std::cout, std::cerr);
}
