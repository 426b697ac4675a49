#include "cli.hpp"

int main(int argc, char** argv) { return arcgd::cli::cli_main(argc, argv); }
