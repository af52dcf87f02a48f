#include "ncstokes/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ncstokes::run_cli(argc, argv, std::cout, std::cerr);
}
