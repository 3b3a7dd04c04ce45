#include "spinsync/commands.hpp"

int main(int argc, char** argv) { return spinsync::run_cli(argc, argv); }
