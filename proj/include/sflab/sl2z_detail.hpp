#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "sflab/sl2z.hpp"

// Building blocks of classify(), exposed for property tests.
namespace sflab::detail {

struct ExtendedGcd {
  std::int64_t g, s, t;  // g = s*x + t*y, g >= 0
};
ExtendedGcd extended_gcd(std::int64_t x, std::int64_t y);

struct ParabolicForm {
  std::array<std::int64_t, 2> v;  // primitive fixed vector
  IntMatrix2 P;                   // (v | u), det 1
  std::int64_t b;                 // P^-1 A P = (1 b; 0 1)
};
// Requires trace 2 and A != I. negate_kernel replaces v by -v.
ParabolicForm parabolic_form(const IntMatrix2& A, bool negate_kernel = false);

std::vector<std::array<std::int64_t, 4>> integer_kernel(std::array<std::array<std::int64_t, 4>, 4> M);

// Integer (x, y) with a x^2 + b xy + c y^2 = 1, if any.
std::optional<std::array<std::int64_t, 2>> represent_one(std::int64_t a, std::int64_t b, std::int64_t c,
                                                         std::int64_t search_bound);

// P with det 1 and A P = P R, if R is SL(2,Z)-conjugate to A.
std::optional<IntMatrix2> elliptic_conjugator(const IntMatrix2& A, const IntMatrix2& R);

}  // namespace sflab::detail
