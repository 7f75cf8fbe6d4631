// SPDX-License-Identifier: Apache-2.0
#include "gentool/cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return gentool::cli::run(argc, argv, std::cout, std::cerr); }
