#pragma once

#include <span>

namespace wcw {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;  // 0 when y has no variance
};

// Ordinary least squares y = intercept + slope * x. Requires >= 2 points with
// distinct x.
LinearFit ordinary_least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace wcw
