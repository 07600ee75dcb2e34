#include <iostream>

#include "weier4/cli.hpp"

int main(int argc, char** argv) {
  return weier4::cli_run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
