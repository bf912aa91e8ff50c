#include <iostream>

#include "gogbench/cli.hpp"

int main(int argc, char** argv) { return gogbench::run_cli(argc, argv, std::cout, std::cerr); }
