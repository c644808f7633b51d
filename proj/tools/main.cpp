#include "cavitynoon/runner.hpp"

int main(int argc, char** argv) { return cavitynoon::runner::run_cli(argc, argv); }
