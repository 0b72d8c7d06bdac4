// SPDX-License-Identifier: Apache-2.0

#include <iostream>

#include "odal/cli.hpp"

int main(int argc, char** argv) { return odal::dispatch(argc, argv, std::cout, std::cerr); }
