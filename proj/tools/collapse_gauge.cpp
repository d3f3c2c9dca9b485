#include <iostream>

#include "collapse_gauge/run.hpp"

int main(int argc, char** argv) {
  return collapse_gauge::run_cli(argc, argv, std::cout, std::cerr);
}
