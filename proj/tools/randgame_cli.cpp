#include "randgame/runner.hpp"

int main(int argc, char** argv) { return randgame::runner::cli_main(argc, argv); }
