#pragma once

#include <cstdint>

namespace annulus {

/// A statistic with its standard error and the number of terms behind it.
/// Deterministic sums carry std_error = 0.
struct CorrelationEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::int64_t n = 0;
};

}  // namespace annulus
