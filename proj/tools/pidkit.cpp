#include <iostream>

#include "pidkit/cli.hpp"

int main(int argc, char** argv) { return pidkit::cli::run(argc, argv, std::cout, std::cerr); }
