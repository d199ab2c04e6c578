#include "commands.hpp"

int main(int argc, char** argv) { return gridpop::cli::run(argc, argv); }
