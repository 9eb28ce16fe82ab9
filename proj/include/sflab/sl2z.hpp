#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "sflab/core.hpp"

namespace sflab {

// Element of SL(2,Z). Entries are row-major (a b; c d); ad - bc = 1 is
// checked on construction and every product is overflow-checked.
class IntMatrix2 {
 public:
  IntMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

  static IntMatrix2 identity() { return {1, 0, 0, 1}; }

  std::int64_t a() const { return a_; }
  std::int64_t b() const { return b_; }
  std::int64_t c() const { return c_; }
  std::int64_t d() const { return d_; }
  std::int64_t trace() const;

  IntMatrix2 inverse() const;
  IntMatrix2 operator-() const;
  friend IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y);
  friend bool operator==(const IntMatrix2&, const IntMatrix2&) = default;

  bool is_identity() const { return *this == identity(); }
  std::string to_string() const;

 private:
  std::int64_t a_, b_, c_, d_;
};

enum class FiberKind { I, Istar, II, III, IV, IIstar, IIIstar, IVstar };

struct KodairaType {
  FiberKind kind = FiberKind::I;
  std::int64_t b = 0;  // only meaningful for I and Istar

  static KodairaType I(std::int64_t b);
  static KodairaType Istar(std::int64_t b);
  static KodairaType of(FiberKind kind);

  bool has_b() const { return kind == FiberKind::I || kind == FiberKind::Istar; }
  bool is_starred() const;
  // Names: I_0, I_3, I_2*, II, III, IV, II*, III*, IV*.
  std::string name() const;
  static KodairaType parse(const std::string& text);

  friend bool operator==(const KodairaType&, const KodairaType&) = default;
};

// Monodromy order; std::nullopt means infinite.
using Order = std::optional<int>;

std::string order_to_string(const Order& order);

struct Classification {
  KodairaType kodaira_type;
  // P with P * representative * P^-1 == input, when one was found.
  std::optional<IntMatrix2> conjugator;
  // Sign of the raw parabolic b before taking the absolute value; 0 otherwise.
  int parabolic_sign = 0;
};

struct InvariantLattice {
  int rank = 0;
  std::optional<std::array<std::int64_t, 2>> generator;
};

Order order(const IntMatrix2& A);
Classification classify(const IntMatrix2& A);
IntMatrix2 representative(const KodairaType& t);
InvariantLattice invariant_vector_rank(const IntMatrix2& A);
std::int64_t euler_number(const KodairaType& t);

}  // namespace sflab
