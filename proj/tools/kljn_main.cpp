#include "kljn/cli.hpp"

int main(int argc, char** argv) { return kljn::cli::run(argc, argv); }
