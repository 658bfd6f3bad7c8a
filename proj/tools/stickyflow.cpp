#include "stickyflow/commands.hpp"

int main(int argc, char** argv) { return stickyflow::cli_main(argc, argv); }
