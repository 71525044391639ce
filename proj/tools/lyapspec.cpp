#include <iostream>
#include <string>
#include <vector>

#include "lyapspec/cli_run.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return lyapspec::run_cli(args, std::cout, std::cerr);
}
