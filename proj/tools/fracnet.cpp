#include "fracnet/cli.hpp"

int main(int argc, char** argv) { return fracnet::cli::dispatch(argc, argv); }
