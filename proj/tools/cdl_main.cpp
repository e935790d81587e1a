#include <cdl/run.hpp>

#include <iostream>

int main(int argc, char** argv) { return cdl::run_cli(argc, argv, std::cout, std::cerr); }
