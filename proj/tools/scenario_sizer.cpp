#include <iostream>

#include "scenario_sizer/cli.hpp"

int main(int argc, char** argv) { return scenario_sizer::cli::main(argc, argv, std::cout, std::cerr); }
