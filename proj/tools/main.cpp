#include "qcf/cli.hpp"

int main(int argc, char** argv) { return qcf::cli_main(argc, argv); }
