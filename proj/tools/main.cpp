#include "riskaverse/cli.hpp"

int main(int argc, char** argv) { return riskaverse::cli::run(argc, argv); }
