#include <iostream>

#include "lifisim/cli.hpp"

int main(int argc, char** argv) { return lifisim::cli::run(argc, argv, std::cout, std::cerr); }
