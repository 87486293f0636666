#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return strobo::cli::runCli(argc, argv, std::cout, std::cerr); }
