#include <iostream>
#include <string>
#include <vector>

#include "gint/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return gint::run_cli(args, std::cout, std::cerr);
}
