#include "polylab/cli.hpp"

int main(int argc, char** argv) { return polylab::run_command(argc, argv); }
