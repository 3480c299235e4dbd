#include "tropgrob/cli.hpp"

int main(int argc, char** argv) { return tropgrob::cli::run(argc, argv); }
