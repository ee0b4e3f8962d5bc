#include <iostream>

#include "srbm/cli.hpp"

int main(int argc, char** argv) {
    return srbm::cli_main(argc, argv, std::cout, std::cerr);
}
