#include <iostream>

#include "mfaccel/cli.hpp"

int main(int argc, char** argv) { return mfaccel::cli::run(argc, argv, std::cout, std::cerr); }
