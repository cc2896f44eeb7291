#include <simplex_neumann/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return simplex_neumann::cli::run(argc, argv, std::cout, std::cerr);
}
