#include "llg/cli.hpp"

int main(int argc, char** argv) { return llg::run_cli(argc, argv); }
