#include <iostream>

#include "trigrec/cli.hpp"

int main(int argc, char** argv) { return trigrec::run_cli(argc, argv, std::cout, std::cerr); }
