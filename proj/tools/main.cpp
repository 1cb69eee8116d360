#include <vector>

#include "disclosure/cli.hpp"

int main(int argc, char** argv) {
    return disclosure::cli::run({argv + 1, argv + argc});
}
