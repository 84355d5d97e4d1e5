#include "qsync/cli.hpp"

int main(int argc, char** argv) { return qsync::run_cli(argc, argv); }
