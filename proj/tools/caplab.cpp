#include "caplab/cli.hpp"

int main(int argc, char** argv) { return caplab::cli_main(argc, argv); }
