#include <string>
#include <vector>

#include "sigcomb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sigcomb::cli::run(args);
}
