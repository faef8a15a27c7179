#include "cli.hpp"

int main(int argc, char** argv) { return screenbie::cli::main(argc, argv); }
