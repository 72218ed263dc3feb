#include <iostream>

#include "mertens_lab/cli.hpp"

int main(int argc, char** argv)
{
    return mlab::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
