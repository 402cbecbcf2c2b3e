#include "commands.hpp"

int main(int argc, char** argv) { return hypvor::cli::run(argc, argv); }
