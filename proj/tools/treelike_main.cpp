#include "treelike/cli.hpp"

int main(int argc, char** argv) { return treelike::run_cli(argc, argv); }
