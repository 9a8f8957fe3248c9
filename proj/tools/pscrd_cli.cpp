#include "pscrd/cli.hpp"

int main(int argc, char** argv) { return pscrd::cli::cli_main(argc, argv); }
