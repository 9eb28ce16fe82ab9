#include "sflab/sl2z.hpp"

#include <array>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sflab/sl2z_detail.hpp"

namespace sflab {

namespace checked {

std::int64_t add(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_add_overflow(x, y, &r)) throw std::overflow_error("int64 overflow in addition");
  return r;
}

std::int64_t sub(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_sub_overflow(x, y, &r)) throw std::overflow_error("int64 overflow in subtraction");
  return r;
}

std::int64_t mul(std::int64_t x, std::int64_t y) {
  std::int64_t r;
  if (__builtin_mul_overflow(x, y, &r)) throw std::overflow_error("int64 overflow in multiplication");
  return r;
}

std::int64_t neg(std::int64_t x) { return sub(0, x); }

}  // namespace checked

using checked::add;
using checked::mul;
using checked::neg;
using checked::sub;

IntMatrix2::IntMatrix2(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
    : a_(a), b_(b), c_(c), d_(d) {
  if (sub(mul(a, d), mul(b, c)) != 1) {
    throw InputError("determinant of (" + std::to_string(a) + " " + std::to_string(b) + "; " +
                     std::to_string(c) + " " + std::to_string(d) + ") is not 1");
  }
}

std::int64_t IntMatrix2::trace() const { return add(a_, d_); }

IntMatrix2 IntMatrix2::inverse() const { return {d_, neg(b_), neg(c_), a_}; }

IntMatrix2 IntMatrix2::operator-() const { return {neg(a_), neg(b_), neg(c_), neg(d_)}; }

IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y) {
  return {add(mul(x.a_, y.a_), mul(x.b_, y.c_)), add(mul(x.a_, y.b_), mul(x.b_, y.d_)),
          add(mul(x.c_, y.a_), mul(x.d_, y.c_)), add(mul(x.c_, y.b_), mul(x.d_, y.d_))};
}

std::string IntMatrix2::to_string() const {
  std::ostringstream os;
  os << "(" << a_ << " " << b_ << "; " << c_ << " " << d_ << ")";
  return os.str();
}

// ---------------------------------------------------------------- KodairaType

KodairaType KodairaType::I(std::int64_t b) {
  if (b < 0) throw InputError("I_b requires b >= 0");
  return {FiberKind::I, b};
}

KodairaType KodairaType::Istar(std::int64_t b) {
  if (b < 0) throw InputError("I_b* requires b >= 0");
  return {FiberKind::Istar, b};
}

KodairaType KodairaType::of(FiberKind kind) { return {kind, 0}; }

bool KodairaType::is_starred() const {
  return kind == FiberKind::Istar || kind == FiberKind::IIstar || kind == FiberKind::IIIstar ||
         kind == FiberKind::IVstar;
}

std::string KodairaType::name() const {
  switch (kind) {
    case FiberKind::I: return "I_" + std::to_string(b);
    case FiberKind::Istar: return "I_" + std::to_string(b) + "*";
    case FiberKind::II: return "II";
    case FiberKind::III: return "III";
    case FiberKind::IV: return "IV";
    case FiberKind::IIstar: return "II*";
    case FiberKind::IIIstar: return "III*";
    case FiberKind::IVstar: return "IV*";
  }
  return "?";
}

KodairaType KodairaType::parse(const std::string& text) {
  static const std::regex ib(R"(I_?(\d+)(\*|star)?)");
  static const std::regex finite(R"((II|III|IV)(\*|star)?)");
  std::smatch m;
  if (std::regex_match(text, m, finite)) {
    const bool star = m[2].matched;
    if (m[1] == "II") return of(star ? FiberKind::IIstar : FiberKind::II);
    if (m[1] == "III") return of(star ? FiberKind::IIIstar : FiberKind::III);
    return of(star ? FiberKind::IVstar : FiberKind::IV);
  }
  if (std::regex_match(text, m, ib)) {
    const std::int64_t b = std::stoll(m[1]);
    return m[2].matched ? Istar(b) : I(b);
  }
  throw InputError("unknown Kodaira type '" + text + "'");
}

std::string order_to_string(const Order& o) { return o ? std::to_string(*o) : "inf"; }

// ---------------------------------------------------------------- order

namespace {

Order order_by_trace(const IntMatrix2& A) {
  switch (A.trace()) {
    case 0: return 4;
    case 1: return 6;
    case -1: return 3;
    case 2: return A.is_identity() ? Order{1} : std::nullopt;
    case -2: return (-A).is_identity() ? Order{2} : std::nullopt;
    default: return std::nullopt;
  }
}

Order order_by_powers(const IntMatrix2& A, int max_exponent) {
  IntMatrix2 p = A;
  for (int n = 1; n <= max_exponent; ++n) {
    if (p.is_identity()) return n;
    try {
      p = p * A;
    } catch (const std::overflow_error&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

Order order(const IntMatrix2& A) {
  const Order by_trace = order_by_trace(A);
  const Order by_powers = order_by_powers(A, 12);
  if (by_trace != by_powers) {
    throw NumericalFailure("order cross-check failed for " + A.to_string());
  }
  return by_trace;
}

// ---------------------------------------------------------------- helpers

namespace detail {

ExtendedGcd extended_gcd(std::int64_t x, std::int64_t y) {
  std::int64_t old_r = x, r = y, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::tie(old_r, r) = std::pair{r, sub(old_r, mul(q, r))};
    std::tie(old_s, s) = std::pair{s, sub(old_s, mul(q, s))};
    std::tie(old_t, t) = std::pair{t, sub(old_t, mul(q, t))};
  }
  if (old_r < 0) {
    old_r = neg(old_r);
    old_s = neg(old_s);
    old_t = neg(old_t);
  }
  return {old_r, old_s, old_t};
}

namespace {

std::int64_t floor_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

}  // namespace

ParabolicForm parabolic_form(const IntMatrix2& A, bool negate_kernel) {
  if (A.trace() != 2 || A.is_identity()) {
    throw InputError("parabolic_form requires trace 2 and A != I, got " + A.to_string());
  }
  std::array<std::int64_t, 2> v{A.b(), sub(1, A.a())};
  if (v[0] == 0 && v[1] == 0) v = {sub(A.d(), 1), neg(A.c())};
  const std::int64_t g = std::gcd(v[0], v[1]);
  v = {v[0] / g, v[1] / g};
  if (v[0] < 0 || (v[0] == 0 && v[1] < 0)) v = {neg(v[0]), neg(v[1])};
  if (negate_kernel) v = {neg(v[0]), neg(v[1])};

  // det(v|u) = v0*u1 - v1*u0 = 1.
  const ExtendedGcd e = extended_gcd(v[0], neg(v[1]));
  std::array<std::int64_t, 2> u{e.t, e.s};
  if (e.g != 1) throw NumericalFailure("kernel vector is not primitive");
  if (v[0] != 0) {
    const std::int64_t m = std::llabs(v[0]);
    const std::int64_t shift = floor_mod(u[0], m) - u[0];
    const std::int64_t k = shift / v[0];
    u = {add(u[0], mul(k, v[0])), add(u[1], mul(k, v[1]))};
  } else {
    const std::int64_t m = std::llabs(v[1]);
    const std::int64_t shift = floor_mod(u[1], m) - u[1];
    const std::int64_t k = shift / v[1];
    u = {add(u[0], mul(k, v[0])), add(u[1], mul(k, v[1]))};
  }
  const IntMatrix2 P(v[0], u[0], v[1], u[1]);
  const IntMatrix2 N = P.inverse() * A * P;
  if (N.a() != 1 || N.c() != 0 || N.d() != 1) {
    throw NumericalFailure("parabolic normal form failed for " + A.to_string());
  }
  return {v, P, N.b()};
}

// Integer kernel of a 4x4 integer matrix by unimodular column reduction.
std::vector<std::array<std::int64_t, 4>> integer_kernel(std::array<std::array<std::int64_t, 4>, 4> M) {
  std::array<std::array<std::int64_t, 4>, 4> U{};
  for (int i = 0; i < 4; ++i) U[i][i] = 1;
  auto col_op = [&](int dst, int src, std::int64_t q) {  // col dst -= q * col src
    for (int r = 0; r < 4; ++r) {
      M[r][dst] = sub(M[r][dst], mul(q, M[r][src]));
      U[r][dst] = sub(U[r][dst], mul(q, U[r][src]));
    }
  };
  auto col_swap = [&](int x, int y) {
    for (int r = 0; r < 4; ++r) {
      std::swap(M[r][x], M[r][y]);
      std::swap(U[r][x], U[r][y]);
    }
  };
  int pivot = 0;
  for (int row = 0; row < 4 && pivot < 4; ++row) {
    for (;;) {
      int best = -1;
      for (int c = pivot; c < 4; ++c) {
        if (M[row][c] != 0 && (best < 0 || std::llabs(M[row][c]) < std::llabs(M[row][best]))) best = c;
      }
      if (best < 0) break;
      col_swap(pivot, best);
      bool done = true;
      for (int c = pivot + 1; c < 4; ++c) {
        if (M[row][c] != 0) {
          col_op(c, pivot, M[row][c] / M[row][pivot]);
          if (M[row][c] != 0) done = false;
        }
      }
      if (done) {
        ++pivot;
        break;
      }
    }
  }
  std::vector<std::array<std::int64_t, 4>> kernel;
  for (int c = pivot; c < 4; ++c) kernel.push_back({U[0][c], U[1][c], U[2][c], U[3][c]});
  return kernel;
}

namespace {

struct Form {
  std::int64_t a, b, c;
  std::int64_t operator()(std::int64_t x, std::int64_t y) const {
    return add(add(mul(a, mul(x, x)), mul(b, mul(x, y))), mul(c, mul(y, y)));
  }
  // 2 * bilinear form.
  std::int64_t bil2(std::array<std::int64_t, 2> p, std::array<std::int64_t, 2> q) const {
    return add(add(mul(2 * a, mul(p[0], q[0])), mul(b, add(mul(p[0], q[1]), mul(p[1], q[0])))),
               mul(2 * c, mul(p[1], q[1])));
  }
};

std::int64_t round_div(std::int64_t num, std::int64_t den) {
  return static_cast<std::int64_t>(std::llround(static_cast<long double>(num) / static_cast<long double>(den)));
}

}  // namespace

std::optional<std::array<std::int64_t, 2>> represent_one(std::int64_t a, std::int64_t b, std::int64_t c,
                                                         std::int64_t search_bound) {
  const Form Q{a, b, c};
  const std::int64_t disc = sub(mul(b, b), mul(4 * a, c));
  if (disc < 0 && a > 0) {
    std::array<std::int64_t, 2> u{1, 0}, v{0, 1};
    for (int it = 0; it < 200; ++it) {
      if (Q(v[0], v[1]) < Q(u[0], u[1])) std::swap(u, v);
      const std::int64_t mu = round_div(Q.bil2(u, v), 2 * Q(u[0], u[1]));
      if (mu == 0) break;
      v = {sub(v[0], mul(mu, u[0])), sub(v[1], mul(mu, u[1]))};
    }
    if (Q(v[0], v[1]) < Q(u[0], u[1])) std::swap(u, v);
    if (Q(u[0], u[1]) == 1) return u;
    return std::nullopt;
  }
  if (disc < 0) return std::nullopt;  // negative definite
  for (std::int64_t x = -search_bound; x <= search_bound; ++x) {
    // c*y^2 + b*x*y + (a*x^2 - 1) = 0
    const std::int64_t A2 = c, B2 = mul(b, x), C2 = sub(mul(a, mul(x, x)), 1);
    if (A2 == 0) {
      if (B2 != 0 && C2 % B2 == 0) return std::array<std::int64_t, 2>{x, -C2 / B2};
      continue;
    }
    const std::int64_t D = sub(mul(B2, B2), mul(4 * A2, C2));
    if (D < 0) continue;
    const auto r = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<long double>(D))));
    for (std::int64_t s : {r - 1, r, r + 1}) {
      if (s < 0 || mul(s, s) != D) continue;
      for (std::int64_t num : {sub(neg(B2), s), add(neg(B2), s)}) {
        if (num % (2 * A2) == 0) return std::array<std::int64_t, 2>{x, num / (2 * A2)};
      }
    }
  }
  return std::nullopt;
}

std::optional<IntMatrix2> elliptic_conjugator(const IntMatrix2& A, const IntMatrix2& R) {
  // Unknown P = (p q; r s); equations A P - P R = 0.
  const std::int64_t a = A.a(), b = A.b(), c = A.c(), d = A.d();
  const std::int64_t ra = R.a(), rb = R.b(), rc = R.c(), rd = R.d();
  std::array<std::array<std::int64_t, 4>, 4> M{{
      {sub(a, ra), neg(rc), b, 0},
      {neg(rb), sub(a, rd), 0, b},
      {c, 0, sub(d, ra), neg(rc)},
      {0, c, neg(rb), sub(d, rd)},
  }};
  const auto K = integer_kernel(M);
  if (K.size() != 2) throw NumericalFailure("commutation kernel is not rank 2 for " + A.to_string());
  auto det4 = [](const std::array<std::int64_t, 4>& p) { return sub(mul(p[0], p[3]), mul(p[1], p[2])); };
  std::array<std::int64_t, 4> sum{};
  for (int i = 0; i < 4; ++i) sum[i] = add(K[0][i], K[1][i]);
  const std::int64_t qa = det4(K[0]), qc = det4(K[1]);
  const std::int64_t qb = sub(sub(det4(sum), qa), qc);
  const auto xy = represent_one(qa, qb, qc, 10000);
  if (!xy) return std::nullopt;
  std::array<std::int64_t, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = add(mul((*xy)[0], K[0][i]), mul((*xy)[1], K[1][i]));
  const IntMatrix2 P(p[0], p[1], p[2], p[3]);
  if (!(A * P == P * R)) throw NumericalFailure("elliptic conjugator check failed");
  return P;
}

}  // namespace detail

// ---------------------------------------------------------------- classify

IntMatrix2 representative(const KodairaType& t) {
  switch (t.kind) {
    case FiberKind::I: return {1, t.b, 0, 1};
    case FiberKind::Istar: return {-1, neg(t.b), 0, -1};
    case FiberKind::II: return {0, 1, -1, 1};
    case FiberKind::IVstar: return {0, -1, 1, -1};
    case FiberKind::IIstar: return {1, -1, 1, 0};
    case FiberKind::IV: return {-1, 1, -1, 0};
    case FiberKind::III: return {0, 1, -1, 0};
    case FiberKind::IIIstar: return {0, -1, 1, 0};
  }
  throw InputError("unknown fiber kind");
}

Classification classify(const IntMatrix2& A) {
  const std::int64_t tr = A.trace();
  if (A.is_identity()) return {KodairaType::I(0), IntMatrix2::identity(), 0};
  if ((-A).is_identity()) return {KodairaType::Istar(0), IntMatrix2::identity(), 0};
  if (tr == 2 || tr == -2) {
    const IntMatrix2 B = tr == 2 ? A : -A;
    const detail::ParabolicForm pf = detail::parabolic_form(B);
    const std::int64_t b = std::llabs(pf.b);
    const int sign = pf.b > 0 ? 1 : -1;
    const KodairaType t = tr == 2 ? KodairaType::I(b) : KodairaType::Istar(b);
    std::optional<IntMatrix2> P;
    if (sign > 0) P = pf.P;
    return {t, P, sign};
  }
  if (tr > 2 || tr < -2) {
    throw DomainError("hyperbolic matrix " + A.to_string() + " is not a Kodaira monodromy");
  }
  std::array<FiberKind, 2> candidates{};
  if (tr == 1) candidates = {FiberKind::II, FiberKind::IIstar};
  if (tr == 0) candidates = {FiberKind::III, FiberKind::IIIstar};
  if (tr == -1) candidates = {FiberKind::IVstar, FiberKind::IV};
  for (FiberKind k : candidates) {
    const KodairaType t = KodairaType::of(k);
    if (auto P = detail::elliptic_conjugator(A, representative(t))) return {t, *P, 0};
  }
  throw NumericalFailure("no elliptic representative is conjugate to " + A.to_string());
}

InvariantLattice invariant_vector_rank(const IntMatrix2& A) {
  if (A.is_identity()) return {2, std::nullopt};
  if (A.trace() == 2) return {1, detail::parabolic_form(A).v};
  return {0, std::nullopt};
}

std::int64_t euler_number(const KodairaType& t) {
  if (t.kind == FiberKind::I) return t.b;
  if (t.kind == FiberKind::Istar) return add(6, t.b);
  throw DomainError("Euler number of " + t.name() + " is only defined here for I_b and I_b*");
}

}  // namespace sflab
