#include <iostream>

#include "cyberbond/cli.hpp"

int main(int argc, char** argv) {
  return cyberbond::cli::run(argc, argv, std::cout, std::cerr);
}
