// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#include <iostream>

#include "asyshrink/cli.hpp"

int main(int argc, char** argv) {
  return asyshrink::cli::run(argc, argv, std::cout, std::cerr);
}
