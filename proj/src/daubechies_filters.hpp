// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The asyshrink Authors

#pragma once

#include <vector>

namespace asyshrink::detail {

// Returns an empty vector when vanishing_moments is outside 1..10.
std::vector<double> daubechies_filter(int vanishing_moments);

}  // namespace asyshrink::detail
