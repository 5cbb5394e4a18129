#include "hdboot/sim/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hdboot::sim::run_cli(argc, argv, std::cout, std::cerr); }
