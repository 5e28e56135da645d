#include "agnor/cli.hpp"

int main(int argc, char** argv) {
    return agnor::cli::run(argc, argv);
}
