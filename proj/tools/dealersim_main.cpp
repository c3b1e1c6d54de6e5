#include <iostream>

#include "dealersim/cli.hpp"

int main(int argc, char** argv) { return dealersim::cli_main(argc, argv, std::cout, std::cerr); }
