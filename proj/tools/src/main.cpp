#include "awlab/cli/commands.hpp"

int main(int argc, char** argv) { return awlab::cli::run_cli(argc, argv); }
