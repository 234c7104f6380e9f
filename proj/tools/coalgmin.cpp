// Thin executable shell; all behaviour lives in coalgmin::cli::run so the
// test suite can drive the same code path with captured streams.

#include <coalgmin/cli.hpp>

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return coalgmin::cli::run(args, std::cout, std::cerr);
}
