#include "plqi/cli.hpp"

int main(int argc, char **argv) { return plqi::cli::run(argc, argv); }
