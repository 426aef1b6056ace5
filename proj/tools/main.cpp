#include <iostream>

#include "rrboost/cli.hpp"

int main(int argc, char** argv) { return rrboost::run_cli(argc, argv, std::cout, std::cerr); }
