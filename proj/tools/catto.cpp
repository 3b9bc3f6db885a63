#include "catto/cli.hpp"

int main(int argc, char** argv) { return catto::run_cli(argc, argv); }
