#include "shiftperc/cli.hpp"

int main(int argc, char** argv) { return shiftperc::cli::run(argc, argv, std::cout, std::cerr); }
