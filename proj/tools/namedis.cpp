#include "namedis/cli.hpp"

int main(int argc, char** argv) { return namedis::cli::run(argc, argv); }
