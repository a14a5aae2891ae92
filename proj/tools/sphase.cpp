#include <iostream>

#include "sphase/cli.hpp"

int main(int argc, char** argv) { return sphase::run_cli(argc, argv, std::cout, std::cerr); }
