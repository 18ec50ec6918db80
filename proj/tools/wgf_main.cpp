#include <string>
#include <vector>

#include "wgf/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return wgf::cli::dispatch(args);
}
