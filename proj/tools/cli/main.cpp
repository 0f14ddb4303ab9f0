#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return zlab::zlab_main(argc, argv, std::cout, std::cerr); }
