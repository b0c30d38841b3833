#include <iostream>

#include "pcpnet/cli.hpp"

int main(int argc, char** argv) {
  return pcpnet::run_cli(argc, argv, std::cin, std::cout, std::cerr);
}
