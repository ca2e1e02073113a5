#include <websmith/cli.hpp>

#include <iostream>

int main(int argc, char** argv) { return websmith::cli::run(argc, argv, std::cout, std::cerr); }
