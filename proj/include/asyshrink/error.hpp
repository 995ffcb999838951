// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <stdexcept>
#include <string>

namespace asyshrink {

enum class ErrorKind {
  kInvalidArgument,  // caller violated a precondition
  kComputation,      // numerical failure on valid input
};

/// Library-wide exception. The kind lets front ends map failures onto
/// distinct exit statuses.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_invalid(const std::string& what) {
  throw Error(ErrorKind::kInvalidArgument, what);
}

[[noreturn]] inline void throw_computation(const std::string& what) {
  throw Error(ErrorKind::kComputation, what);
}

}  // namespace asyshrink
