#include "harmonic/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return harmonic::cli::run(argc, argv, std::cout, std::cerr);
}
