#include "taskload/cli/commands.hpp"

int main(int argc, char** argv) { return taskload::cli::run_cli(argc, argv); }
