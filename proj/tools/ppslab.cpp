#include <iostream>
#include <string>
#include <vector>

#include "ppslab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ppslab::cli::run_main(std::move(args), std::cout, std::cerr);
}
