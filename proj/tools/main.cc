#include <iostream>

#include "cli.h"

int main(int argc, char** argv) { return empvix::cli::run(argc, argv, std::cout, std::cerr); }
