#include <iostream>

#include "survbound/cli.hpp"

int main(int argc, char** argv) { return survbound::run_cli(argc, argv, std::cout, std::cerr); }
