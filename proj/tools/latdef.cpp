#include <iostream>

#include "latdef/cli.hpp"

int main(int argc, char** argv) { return latdef::cli::run(argc, argv, std::cout, std::cerr); }
