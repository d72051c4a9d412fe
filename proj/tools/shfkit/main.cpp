#include <iostream>

#include "shfkit/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return shf::cli::run_cli(args, std::cout, std::cerr);
}
