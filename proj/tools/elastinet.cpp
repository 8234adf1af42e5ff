#include "elastinet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return elastinet::run_cli(argc, argv, std::cout, std::cerr); }
