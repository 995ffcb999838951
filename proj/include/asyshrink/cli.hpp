// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <iosfwd>
#include <vector>

namespace asyshrink::cli {

/// Exit statuses of the command-line front end.
enum ExitCode : int {
  kSuccess = 0,
  kComputationError = 1,
  kUsageError = 2,
};

/// Runs `asyshrink <subcommand> [flags]` and returns the exit status.
/// Normal output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Reads one value per row from column `column` (1-based) of a CSV stream.
/// A non-numeric first row is taken as a header; blank rows are skipped.
/// Throws Error(kInvalidArgument) naming the offending row.
std::vector<double> read_series_csv(std::istream& in, int column = 1);

/// Extends `x` to the next power of two by mirroring its tail
/// (x[n-1], x[n-2], ...).
std::vector<double> reflect_pad(const std::vector<double>& x);

}  // namespace asyshrink::cli
