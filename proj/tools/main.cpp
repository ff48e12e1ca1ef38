#include "interfact/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return interfact::cli::run(argc, argv, std::cout, std::cerr);
}
