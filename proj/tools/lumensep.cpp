#include <iostream>

#include "lumensep/cli.hpp"

int main(int argc, char** argv) { return lumensep::run_cli(argc, argv, std::cout, std::cerr); }
