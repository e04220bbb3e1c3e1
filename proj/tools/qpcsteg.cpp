#include "qpc/cli.hpp"

int main(int argc, char** argv) {
    return qpc::cli::run_main(argc, argv);
}
