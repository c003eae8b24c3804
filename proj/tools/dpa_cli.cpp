#include "dpa/cli.hpp"

int main(int argc, char** argv) { return dpa::cli::run(argc, argv); }
