// Command-line front end. All behavior lives in the library header so that
// tests can drive the dispatcher in-process; this translation unit only
// forwards the process arguments and standard streams.
#include <iostream>

#include "rlbesov/cli.hpp"

int main(int argc, char** argv) {
    return rlbesov::cli::run(argc, argv, std::cout, std::cerr);
}
