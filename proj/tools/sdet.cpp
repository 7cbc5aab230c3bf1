#include "sdet/cli.hpp"

int main(int argc, char** argv) { return sdet::cli::run(argc, argv); }
