#include <iostream>

#include "pvc/cli.hpp"

int main(int argc, char** argv) { return pvc::cli::main_entry(argc, argv, std::cout, std::cerr); }
