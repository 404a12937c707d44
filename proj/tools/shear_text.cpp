#include "sheartext/cli.hpp"

int main(int argc, char** argv) { return sheartext::run_cli(argc, argv); }
