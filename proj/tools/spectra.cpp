#include <iostream>

#include "spectra_app.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return spectra::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
