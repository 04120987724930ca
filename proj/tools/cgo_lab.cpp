#include <cgo/cli.hpp>

int main(int argc, char** argv) { return cgo::cli::main(argc, argv); }
