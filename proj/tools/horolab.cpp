#include <iostream>
#include <string>
#include <vector>

#include "horolab/runner.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return horolab::run(args, std::cout, std::cerr);
}
