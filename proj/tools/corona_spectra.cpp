#include "corona/cli.hpp"

int main(int argc, char** argv) { return corona::cli::main_entry(argc, argv); }
