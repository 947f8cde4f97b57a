#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return zkgame::cli::main_cli(argc, argv, std::cout, std::cerr); }
