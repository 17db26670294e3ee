#include <iostream>

#include "ordopt/cli.hpp"

int main(int argc, char** argv) { return ordopt::run_cli(argc, argv, std::cout, std::cerr); }
