#include <iostream>

#include "qdeform_cli.hpp"

int main(int argc, char** argv) {
  return qdeform::cli::run_cli(argc, argv, std::cout, std::cerr);
}
