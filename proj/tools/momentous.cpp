#include <iostream>

#include "momentous/cli.hpp"

int main(int argc, char** argv) {
    return momentous::cli::run(argc, argv, std::cout, std::cerr);
}
