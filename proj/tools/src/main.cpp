#include "feedbalance_cli/cli.hpp"

int main(int argc, char** argv) { return feedbalance::cli::RunCli(argc, argv); }
