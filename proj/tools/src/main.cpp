#include <iostream>

#include "spectralgap/cli.hpp"

int main(int argc, char** argv) { return spectralgap::cli::run(argc, argv, std::cout, std::cerr); }
