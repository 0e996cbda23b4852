#include "irrigation/cli.hpp"

int main(int argc, char** argv) { return irrigation::cli::main(argc, argv); }
