#include <iostream>

#include <unistd.h>

#include "cli.hpp"

int main(int argc, char** argv) {
    return devrisk::cli::run(argc, argv, std::cout, std::cerr, isatty(STDOUT_FILENO) == 1);
}
