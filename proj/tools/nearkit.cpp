#include "nearkit/cli.hpp"

int main(int argc, char** argv) { return nearkit::cli::run(argc, argv); }
