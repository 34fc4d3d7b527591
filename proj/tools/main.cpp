#include "latreg/harness.hpp"

int main(int argc, char** argv) { return latreg::harness::cli_main(argc, argv); }
