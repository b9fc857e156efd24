#include <iostream>

#include "qcrit/cli.hpp"

int main(int argc, char** argv) { return qcrit::cli::run(argc, argv, std::cout, std::cerr); }
