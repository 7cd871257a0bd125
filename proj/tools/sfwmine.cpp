#include <iostream>

#include "sfw/cli.hpp"

int main(int argc, char** argv) {
  return sfw::cli::run(argc, argv, std::cout, std::cerr);
}
