#include "nqs_cli/app.hpp"

int main(int argc, char** argv) { return nqs::cli::run(argc, argv); }
