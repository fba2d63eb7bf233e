#include "levywalk/cli.hpp"

int main(int argc, char** argv) { return levywalk::cli_main(argc, argv); }
