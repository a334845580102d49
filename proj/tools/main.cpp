#include <iostream>
#include <string>
#include <vector>

#include "qspline_cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return qspline::cli::run(std::move(args), std::cout, std::cerr);
}
