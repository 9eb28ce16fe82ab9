#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sflab {

using Scalar = double;
using Complex = std::complex<Scalar>;

inline constexpr Scalar kPi = std::numbers::pi_v<Scalar>;
inline constexpr Complex kI{0.0, 1.0};

// Invalid input: malformed models, out-of-domain points, bad files.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A well-posed computation failed to converge or lost positivity.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A request outside what the library defines (e.g. Euler number of II).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace sflab
