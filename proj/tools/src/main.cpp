#include <iostream>
#include <string>
#include <vector>

#include "bernmm/cli/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return bernmm::cli::run(args, std::cout, std::cerr);
}
