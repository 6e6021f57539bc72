#include <iostream>

#include "dfbench/cli/commands.hpp"

int main(int argc, char** argv) {
    return dfbench::cli::run(argc, argv, std::cout, std::cerr);
}
