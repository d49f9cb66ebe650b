#include "uq/cli.hpp"

int main(int argc, char** argv) { return uq::run_cli(argc, argv); }
