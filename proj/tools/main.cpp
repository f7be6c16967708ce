#include "cnet/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cnet::run_cli(argc, argv, std::cout, std::cerr);
}
