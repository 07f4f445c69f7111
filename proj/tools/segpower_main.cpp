#include <iostream>

#include "segpower/cli.hpp"

int main(int argc, char** argv) { return segpower::cli::run(argc, argv, std::cout, std::cerr); }
