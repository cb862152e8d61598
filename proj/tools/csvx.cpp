#include "csvx/cli.hpp"

int main(int argc, char** argv) { return csvx::cli::run(argc, argv); }
