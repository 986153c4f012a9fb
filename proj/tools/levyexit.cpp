#include <iostream>

#include "levyexit/cli/runner.hpp"

int main(int argc, char** argv) { return levyexit::cli::run_cli(argc, argv, std::cout, std::cerr); }
