#include "dcl/cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) { return dcl::cli::run(argc, argv, std::cout, std::cerr); }
