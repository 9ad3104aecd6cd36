#include <iostream>

#include "fheight/cli.hpp"

int main(int argc, char** argv) { return fheight::cli::run(argc, argv, std::cout, std::cerr); }
