#include <iostream>

#include "qtrace_cli.hpp"

int main(int argc, char** argv) { return qtrace::cli::run(argc, argv, std::cout, std::cerr); }
