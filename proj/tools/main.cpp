// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 WindTunnel Contributors

#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return windtunnel::cli::run(args, std::cout, std::cerr);
}
