#include "cli.hpp"

int main(int argc, char** argv) { return viscowave::cli::cli_main(argc, argv); }
