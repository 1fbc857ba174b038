#include "csmaline/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return csmaline::run_command(argc, argv, std::cout, std::cerr); }
