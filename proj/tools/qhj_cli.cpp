#include "commands.hpp"

int main(int argc, char** argv) { return qhj::cli::run(argc, argv); }
