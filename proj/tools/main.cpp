#include "ontoscen/cli.hpp"

int main(int argc, char** argv) { return ontoscen::run_cli(argc, argv); }
