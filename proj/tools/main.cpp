#include "gazeattn/cli.hpp"

int main(int argc, char** argv) { return gazeattn::run_cli(argc, argv); }
