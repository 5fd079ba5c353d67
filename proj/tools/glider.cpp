#include "glider/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return glider::run_cli(argc, argv, std::cout, std::cerr); }
