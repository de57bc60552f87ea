#include "mfv/commands.hpp"

int main(int argc, char** argv) { return mfv::cli_main(argc, argv); }
