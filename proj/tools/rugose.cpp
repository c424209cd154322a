#include "rugose/cli.hpp"

int main(int argc, char** argv) { return rugose::cli(argc, argv); }
