#include <iostream>
#include <string>
#include <vector>

#include "svmlab/cli.hpp"

int main(int argc, char** argv) {
    return svmlab::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
