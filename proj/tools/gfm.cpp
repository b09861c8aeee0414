#include "gfm/cli.hpp"

int main(int argc, char** argv) { return gfm::run_cli(argc, argv); }
