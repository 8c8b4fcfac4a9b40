#include <iostream>

#include "swarmstab/cli.hpp"

int main(int argc, char** argv) { return swarmstab::run_cli(argc, argv, std::cout, std::cerr); }
