#include "airyspec/cli.hpp"

int main(int argc, char** argv) { return airyspec::cli::run(argc, argv); }
