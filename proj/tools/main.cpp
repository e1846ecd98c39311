#include "riskband/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return riskband::cli::run(argc, argv, std::cout, std::cerr); }
