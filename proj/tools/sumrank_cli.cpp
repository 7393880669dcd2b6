#include <iostream>

#include "sumrank/cli.hpp"

int main(int argc, char** argv) { return sumrank::run_cli(argc, argv, std::cout, std::cerr); }
