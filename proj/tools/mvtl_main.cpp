#include <iostream>

#include "mvtl/cli/app.hpp"

int main(int argc, char** argv) { return mvtl::cli::run_cli(argc, argv, std::cout, std::cerr); }
