#include <iostream>

#include "lowvolt/cli.hpp"

int main(int argc, char** argv) { return lowvolt::run_cli(argc, argv, std::cout, std::cerr); }
