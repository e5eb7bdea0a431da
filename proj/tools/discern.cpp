#include <iostream>
#include <string>
#include <vector>

#include "discern/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return discern::run_cli(args, std::cout, std::cerr);
}
