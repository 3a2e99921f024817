#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "twostep/cli.hpp"

int main(int argc, char** argv) {
    try {
        return twostep::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout,
                                 std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "fatal: " << e.what() << '\n';
        return 4;
    }
}
