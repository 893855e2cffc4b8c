#include <iostream>

#include "proxyzoo_cli/commands.hpp"

int main(int argc, char** argv) { return proxyzoo::cli::run(argc, argv, std::cout, std::cerr); }
