#include <iostream>

#include "capint/cli.hpp"

int main(int argc, char** argv) { return capint::cli::run(argc, argv, std::cout, std::cerr); }
