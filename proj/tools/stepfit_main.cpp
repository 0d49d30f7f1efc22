#include "stepfit/cli.hpp"

int main(int argc, char** argv) { return stepfit::run_cli(argc, argv); }
