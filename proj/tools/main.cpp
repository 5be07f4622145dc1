#include "booldyn/cli.hpp"

int main(int argc, char** argv) {
    return booldyn::cli::run(argc, argv, std::cout, std::cerr);
}
