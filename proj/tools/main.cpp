#include "clmm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return clmm::cli::run(argc, argv, std::cout, std::cerr); }
