#include <iostream>

#include "flatdbar/cli.hpp"

int main(int argc, char** argv) { return flatdbar::run(argc, argv, std::cout, std::cerr); }
