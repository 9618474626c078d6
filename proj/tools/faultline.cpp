#include "faultline/cli.hpp"

int main(int argc, char** argv) { return faultline::cli::cli_main(argc, argv); }
