#include "ratos/cli.hpp"

int main(int argc, char** argv) { return ratos::run_cli(argc, argv); }
