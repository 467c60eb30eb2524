#include <iostream>

#include "gfbp/cli.hpp"

int main(int argc, char** argv) {
    return gfbp::cli::run_cli(argc, argv, std::cout, std::cerr);
}
