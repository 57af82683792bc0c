#include "wavemodel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return wavemodel::cli::run(argc, argv, std::cout, std::cerr); }
