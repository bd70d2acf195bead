#include <iostream>

#include "medcorpus/cli.hpp"

int main(int argc, char** argv) {
    return medcorpus::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
