#pragma once

#include <utility>
#include <vector>

#include "sflab/core.hpp"

namespace sflab {

// Ordinary least squares of log(value) against log(scale) (power law) or
// against scale (exponential).
struct GrowthFit {
  Scalar exponent = 0;
  Scalar intercept = 0;
  Scalar r_squared = 0;
  std::vector<std::pair<Scalar, Scalar>> samples;  // (scale, value)

  static constexpr Scalar kMinRSquared = 0.999;
  bool ok() const { return r_squared >= kMinRSquared; }
};

struct LineFit {
  Scalar slope = 0;
  Scalar intercept = 0;
  Scalar r_squared = 0;
};
LineFit fit_line(const std::vector<Scalar>& x, const std::vector<Scalar>& y);

GrowthFit fit_power_law(const std::vector<Scalar>& scale, const std::vector<Scalar>& value);
GrowthFit fit_exponential(const std::vector<Scalar>& scale, const std::vector<Scalar>& value);

std::vector<Scalar> log_space(Scalar a, Scalar b, int n);
std::vector<Scalar> lin_space(Scalar a, Scalar b, int n);

}  // namespace sflab
