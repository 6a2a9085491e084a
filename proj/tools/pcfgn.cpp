#include <iostream>

#include <pcfgn/cli.hpp>

int main(int argc, char** argv) { return pcfgn::cli::run(argc, argv, std::cout, std::cerr); }
