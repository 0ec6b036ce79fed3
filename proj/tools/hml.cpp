#include "hml/cli.hpp"

int main(int argc, char** argv) { return hml::run_cli(argc, argv); }
