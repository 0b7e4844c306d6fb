#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return curvisynth::cli::run(argc, argv, std::cout, std::cerr);
}
