#include <iostream>
#include <string>
#include <vector>

#include "capdim/cli.hpp"

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    return capdim::run(args, std::cout, std::cerr);
}
