#include <iostream>

#include "lqt/cli.hpp"

int main(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return lqt::run(args, std::cout, std::cerr);
}
