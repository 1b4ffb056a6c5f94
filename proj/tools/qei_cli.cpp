#include "qei/cli.hpp"

int main(int argc, char** argv) { return qei::cli_main(argc, argv); }
