#include "yde/cli.hpp"

int main(int argc, char** argv) { return yde::run_cli(argc, argv); }
