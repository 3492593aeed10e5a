#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return catana::cli::run(argc, argv, std::cout, std::cerr); }
