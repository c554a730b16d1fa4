#include <iostream>
#include <string>
#include <vector>

#include "provsig/cli.hpp"

int main(int argc, char** argv) {
    return provsig::run_siggen(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
