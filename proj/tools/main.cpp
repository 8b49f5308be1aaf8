#include <iostream>

#include "secmarkov/cli.hpp"

int main(int argc, char** argv) { return secmarkov::cli::run(argc, argv, std::cout, std::cerr); }
