#include "gemlab/cli.hpp"

int main(int argc, char** argv) { return gemlab::cli::run(argc, argv); }
