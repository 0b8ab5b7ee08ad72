#include <iostream>

#include "fredholm/cli/commands.hpp"

int main(int argc, char** argv) {
    return fredholm::cli::run(argc, argv, std::cout, std::cerr);
}
