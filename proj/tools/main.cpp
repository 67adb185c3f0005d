#include <iostream>
#include <string>
#include <vector>

#include "reginv/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return reginv::run_cli(args, std::cout, std::cerr);
}
