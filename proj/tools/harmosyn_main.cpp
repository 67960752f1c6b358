#include "harmosyn/cli.hpp"

int main(int argc, char** argv) { return harmosyn::run_cli(argc, argv); }
