#include "sfbif/cli.hpp"

int main(int argc, char** argv) { return sfbif::cli::run(argc, argv); }
