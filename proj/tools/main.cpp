#include "ionstark/cli.hpp"

int main(int argc, char** argv) { return ionstark::run_cli(argc, argv); }
