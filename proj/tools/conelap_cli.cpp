#include <iostream>

#include "conelap/cli.hpp"

int main(int argc, char** argv) {
  return conelap::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
