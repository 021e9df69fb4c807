#include "uext/cli.hpp"

int main(int argc, char** argv) { return uext::cli::run(argc, argv); }
