#include <iostream>

#include "cfinite/cli.hpp"

int main(int argc, char** argv) {
    return cfinite::run_cli(argc, argv, std::cout, std::cerr);
}
