#include <iostream>

#include "rsp/cli.hpp"

int main(int argc, char** argv) { return rsp::cli_dispatch(argc, argv, std::cout, std::cerr); }
