#include <iostream>

#include "ecconst/cli.hpp"

int main(int argc, char** argv) { return ecconst::run_cli(argc, argv, std::cout, std::cerr); }
