#include "sflab/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "json.hpp"
#include "sflab/asymptotics.hpp"
#include "sflab/curvature.hpp"
#include "sflab/fit.hpp"
#include "sflab/ma_lab.hpp"
#include "sflab/semiflat.hpp"
#include "sflab/sl2z_detail.hpp"
#include "sflab/sobolev.hpp"

namespace sflab {

Scalar SubCheck::severity() const {
  if (!std::isfinite(measured)) return std::numeric_limits<Scalar>::infinity();
  if (upper_bound) {
    const Scalar bound = target + tolerance;
    if (bound <= 0) return measured <= bound ? 0.0 : std::numeric_limits<Scalar>::infinity();
    return measured / bound;
  }
  const Scalar d = std::abs(measured - target);
  if (tolerance == 0) return d == 0 ? 0.0 : std::numeric_limits<Scalar>::infinity();
  return d / tolerance;
}

namespace {

using Clock = std::chrono::steady_clock;

class Checks {
 public:
  void near(std::string name, Scalar measured, Scalar target, Scalar tol) {
    SubCheck c{std::move(name), measured, target, tol, false, false};
    c.pass = std::isfinite(measured) && std::abs(measured - target) <= tol;
    list.push_back(std::move(c));
  }
  void at_most(std::string name, Scalar measured, Scalar bound, Scalar slack = 0) {
    SubCheck c{std::move(name), measured, bound, slack, true, false};
    c.pass = std::isfinite(measured) && measured <= bound + slack;
    list.push_back(std::move(c));
  }
  void holds(std::string name, bool ok) { near(std::move(name), ok ? 0.0 : 1.0, 0.0, 0.0); }

  std::vector<SubCheck> list;
};

CriterionResult finish(int id, std::string name, Scalar limit, Clock::time_point start, Checks checks) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  r.time_limit = limit;
  r.seconds = std::chrono::duration<Scalar>(Clock::now() - start).count();
  checks.at_most("runtime_s", r.seconds, limit);
  r.checks = std::move(checks.list);
  r.pass = std::all_of(r.checks.begin(), r.checks.end(), [](const SubCheck& c) { return c.pass; });
  // Headline: the first failing check, else the first one.
  const SubCheck* head = &r.checks.front();
  for (const SubCheck& c : r.checks)
    if (!c.pass && (head->pass || c.severity() > head->severity())) head = &c;
  if (head->pass) {
    for (const SubCheck& c : r.checks)
      if (c.name != "runtime_s" && c.severity() > head->severity()) head = &c;
  }
  r.measured = head->measured;
  r.target = head->target;
  r.tolerance = head->tolerance;
  r.upper_bound = head->upper_bound;
  r.worst = head->name;
  return r;
}

Scalar frac(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

struct GoldenRow {
  const char* type;
  int sign;
  const char* matrix;
  std::int64_t a, b, c, d;  // b = 1 for the parabolic rows
  int order;                // 0 = infinite
  int N;
  const char* incomplete;
  const char* complete;
};

constexpr GoldenRow kGolden[] = {
    {"I_0", +1, "(1 0; 0 1)", 1, 0, 0, 1, 1, 0, "1", "0"},
    {"I_0*", -1, "(1 0; 0 1)", 1, 0, 0, 1, 2, 1, "1/2", "1/2"},
    {"II", +1, "(0 1; -1 1)", 0, 1, -1, 1, 6, 1, "5/6", "1/6"},
    {"IV*", -1, "(0 1; -1 1)", 0, 1, -1, 1, 3, 1, "1/3", "2/3"},
    {"II*", +1, "(1 -1; 1 0)", 1, -1, 1, 0, 6, 1, "1/6", "5/6"},
    {"IV", -1, "(1 -1; 1 0)", 1, -1, 1, 0, 3, 1, "2/3", "1/3"},
    {"I_0", +1, "(1 0; 0 1)", 1, 0, 0, 1, 1, 0, "1", "0"},
    {"I_0*", -1, "(1 0; 0 1)", 1, 0, 0, 1, 2, 1, "1/2", "1/2"},
    {"III", +1, "(0 1; -1 0)", 0, 1, -1, 0, 4, 1, "3/4", "1/4"},
    {"III*", -1, "(0 1; -1 0)", 0, 1, -1, 0, 4, 1, "1/4", "3/4"},
    {"I_0", +1, "(1 0; 0 1)", 1, 0, 0, 1, 1, 0, "1", "0"},
    {"I_0*", -1, "(1 0; 0 1)", 1, 0, 0, 1, 2, 1, "1/2", "1/2"},
    {"I_1", +1, "(1 b; 0 1)", 1, 1, 0, 1, 0, 0, "1", "0"},
    {"I_1*", -1, "(1 b; 0 1)", 1, 1, 0, 1, 0, 1, "1/2", "1/2"},
};

Order to_order(int o) { return o == 0 ? Order{} : Order{o}; }

IntMatrix2 random_sl2z(std::mt19937_64& rng, std::int64_t bound) {
  std::uniform_int_distribution<std::int64_t> pick(-bound, bound);
  for (;;) {
    const std::int64_t a = pick(rng), c = pick(rng);
    const auto e = detail::extended_gcd(a, c);
    if (e.g != 1) continue;
    // (a, c) completed by (b, d) = (-t, s) + k (a, c); choose k to shrink.
    std::int64_t b = -e.t, d = e.s;
    const std::int64_t n2 = a * a + c * c;
    const std::int64_t k = static_cast<std::int64_t>(std::llround(-static_cast<double>(a * b + c * d) / n2));
    b += k * a;
    d += k * c;
    if (std::abs(b) > bound || std::abs(d) > bound) continue;
    return IntMatrix2(a, b, c, d);
  }
}

Scalar uniform(std::mt19937_64& rng, Scalar lo, Scalar hi) { return std::uniform_real_distribution<Scalar>(lo, hi)(rng); }

// Base point inside the base circle |z| = 1/2, away from the branch cut of
// the principal logarithm. Near |z| = 1 the I_b fibers degenerate.
Complex random_base_point(std::mt19937_64& rng, const FiberModel& model) {
  const Scalar r = uniform(rng, 0.02, kBaseRadius);
  const Scalar span = model.uses_u_coordinate() ? 0.45 * kPi : 0.9 * kPi;
  return std::polar(r, uniform(rng, -span, span));
}

Complex random_fiber_point(std::mt19937_64& rng, const FiberModel& model, Complex z) {
  const PeriodSample s = generators(model, z);
  return uniform(rng, 0.0, 1.0) * s.tau1 + uniform(rng, 0.0, 1.0) * s.tau2;
}

FiberModel with_m(FiberModel model, std::optional<int> m) {
  model.m = m;
  return model;
}

// One representative per model family, with and without j-multiplicity.
std::vector<FiberModel> model_families() {
  auto of = [](FiberKind k, std::optional<int> m, PoleFlag p = PoleFlag::MinusD) {
    return with_m(FiberModel::standard(KodairaType::of(k), p), m);
  };
  std::vector<FiberModel> out;
  out.push_back(FiberModel::standard(KodairaType::I(1)));
  FiberModel i3 = FiberModel::standard(KodairaType::I(3), PoleFlag::Zero);
  i3.epsilon = 0.5;
  i3.k = {Complex{2.0, 0.0}};
  out.push_back(i3);
  out.push_back(FiberModel::standard(KodairaType::Istar(1)));
  out.push_back(FiberModel::standard(KodairaType::Istar(2), PoleFlag::Zero));
  FiberModel i0 = FiberModel::standard(KodairaType::I(0));
  i0.tau = TauFunction::linear(Complex{0.0, 0.5}, Complex{0.4, 0.0});
  out.push_back(i0);
  FiberModel i0e = FiberModel::standard(KodairaType::I(0), PoleFlag::Zero);
  i0e.tau = TauFunction::exponential(Complex{0.0, 1.5});
  i0e.k = {Complex{1.0, 0.0}, Complex{1.0 / 3.0, 0.0}};
  out.push_back(i0e);
  FiberModel i0s = FiberModel::standard(KodairaType::Istar(0));
  i0s.tau = TauFunction::linear(kI, Complex{0.25, 0.0});
  out.push_back(i0s);
  out.push_back(of(FiberKind::II, 1));
  out.push_back(of(FiberKind::II, std::nullopt));
  out.push_back(of(FiberKind::III, 1, PoleFlag::Zero));
  out.push_back(of(FiberKind::IV, 2));
  out.push_back(of(FiberKind::IIstar, 2));
  out.push_back(of(FiberKind::IIIstar, 3));
  out.push_back(of(FiberKind::IVstar, 1, PoleFlag::Zero));
  return out;
}

std::string label(const FiberModel& m) {
  return m.type.name() + (m.m ? " m=" + std::to_string(*m.m) : std::string(" m=inf")) + " " + to_string(m.pole);
}

}  // namespace

// ------------------------------------------------------------------ 1

CriterionResult check_golden_table(const std::vector<TableRow>& registry, std::uint64_t seed) {
  const auto start = Clock::now();
  Checks ck;
  const std::size_t expected = std::size(kGolden);
  ck.near("registry_rows", static_cast<Scalar>(registry.size()), static_cast<Scalar>(expected), 0);

  int row_mismatch = 0;
  for (std::size_t i = 0; i < std::min(registry.size(), expected); ++i) {
    const TableRow& r = registry[i];
    const GoldenRow& g = kGolden[i];
    bool ok = r.type.name() == g.type && r.sign == g.sign && r.matrix == g.matrix && r.order == to_order(g.order) &&
              r.N == g.N && r.theta_incomplete_text == g.incomplete && r.theta_complete_text == g.complete &&
              r.theta_incomplete == frac(g.incomplete) && r.theta_complete == frac(g.complete);
    try {
      const IntMatrix2 M = IntMatrix2(g.a, g.b, g.c, g.d);
      const IntMatrix2 A = g.sign > 0 ? M : -M;
      ok = ok && classify(A).kodaira_type == r.type && order(A) == r.order;
      const IntMatrix2 R = representative(r.type);
      ok = ok && classify(R).kodaira_type == r.type && order(R) == r.order;
      const ConeAngles ca = cone_angles(r.type);
      ok = ok && ca.incomplete == r.theta_incomplete && ca.complete == r.theta_complete;
      ok = ok && multiplicity_N(FiberModel::standard(r.type)) == r.N;
    } catch (const std::exception&) {
      ok = false;
    }
    if (!ok) ++row_mismatch;
  }
  ck.near("row_mismatches", row_mismatch, 0, 0);

  std::mt19937_64 rng(seed);
  std::vector<KodairaType> types{KodairaType::I(0),     KodairaType::I(1),     KodairaType::I(2),
                                 KodairaType::I(3),     KodairaType::I(7),     KodairaType::Istar(0),
                                 KodairaType::Istar(1), KodairaType::Istar(2), KodairaType::Istar(5)};
  for (FiberKind k : {FiberKind::II, FiberKind::III, FiberKind::IV, FiberKind::IIstar, FiberKind::IIIstar,
                      FiberKind::IVstar})
    types.push_back(KodairaType::of(k));
  int conj_fail = 0;
  for (const KodairaType& t : types) {
    const IntMatrix2 R = representative(t);
    const Order ord = order(R);
    for (int trial = 0; trial < 500; ++trial) {
      const IntMatrix2 P = random_sl2z(rng, 50);
      try {
        const IntMatrix2 A = P * R * P.inverse();
        const Classification c = classify(A);
        bool ok = c.kodaira_type == t && order(A) == ord;
        if (c.conjugator) ok = ok && (*c.conjugator) * representative(c.kodaira_type) * c.conjugator->inverse() == A;
        if (!ok) ++conj_fail;
      } catch (const std::exception&) {
        ++conj_fail;
      }
    }
  }
  ck.near("conjugation_failures", conj_fail, 0, 0);
  return finish(1, "golden table data", 5, start, std::move(ck));
}

// ------------------------------------------------------------------ 2

CriterionResult check_cone_angles() {
  const auto start = Clock::now();
  Checks ck;
  constexpr Scalar r = 1e-8;
  auto one = [&](const FiberModel& model, Scalar target) {
    const Scalar theta = cone_angle_numeric(BaseMetric(model), r);
    ck.near("theta " + label(model), theta, target, 0.02 * target);
  };
  const std::pair<FiberKind, std::vector<int>> finite[] = {
      {FiberKind::II, {1, 4}},      {FiberKind::IVstar, {1, 4}},  {FiberKind::IIstar, {2, 5}},
      {FiberKind::IV, {2, 5}},      {FiberKind::III, {1, 3}},     {FiberKind::IIIstar, {1, 3}},
  };
  for (const auto& [kind, ms] : finite) {
    for (PoleFlag p : {PoleFlag::Zero, PoleFlag::MinusD}) {
      const FiberModel base = FiberModel::standard(KodairaType::of(kind), p);
      const ConeAngles ca = cone_angles(base);
      const Scalar target = p == PoleFlag::Zero ? ca.incomplete : ca.complete;
      one(base, target);
      for (int m : ms) one(with_m(base, m), target);
    }
  }
  for (KodairaType t : {KodairaType::I(0), KodairaType::Istar(0)}) {
    for (PoleFlag p : {PoleFlag::Zero, PoleFlag::MinusD}) {
      const FiberModel model = FiberModel::standard(t, p);
      const ConeAngles ca = cone_angles(model);
      one(model, p == PoleFlag::Zero ? ca.incomplete : ca.complete);
    }
  }
  for (int b : {1, 2}) {
    one(FiberModel::standard(KodairaType::I(b), PoleFlag::Zero), 1.0);
    one(FiberModel::standard(KodairaType::Istar(b), PoleFlag::Zero), 0.5);
  }
  return finish(2, "cone angles at r = 1e-8", 30, start, std::move(ck));
}

// ------------------------------------------------------------------ 3

CriterionResult check_ib_curvature() {
  const auto start = Clock::now();
  Checks ck;
  const std::vector<Scalar> radii = log_space(1e-12, 1e-6, 16);
  for (int b : {1, 2, 3}) {
    for (Scalar eps : {0.5, 1.0}) {
      for (Scalar k0 : {1.0, 2.0}) {
        FiberModel model = FiberModel::standard(KodairaType::I(b));
        model.epsilon = eps;
        model.k = {Complex{k0, 0.0}};
        const auto scan = curvature_decay_scan(model, radii);
        std::vector<Scalar> L, th;
        for (auto it = scan.rbegin(); it != scan.rend(); ++it) {
          L.push_back(std::abs(std::log(std::abs(it->z))));
          th.push_back(it->theta_norm_sq);
        }
        char tag[64];
        std::snprintf(tag, sizeof tag, "b=%d eps=%g k0=%g", b, eps, k0);
        const GrowthFit fit = fit_power_law(L, th);
        ck.near(std::string("slope ") + tag, fit.exponent, -6.0, 0.1);
        ck.at_most(std::string("fit 1-R^2 ") + tag, 1.0 - fit.r_squared, 1.0 - GrowthFit::kMinRSquared);
        const Scalar deep = scan.front().ratio, shallow = scan.back().ratio;
        ck.near(std::string("ratio@1e-12 ") + tag, deep, 1.0, 0.15);
        ck.at_most(std::string("deviation shrinks ") + tag, std::abs(deep - 1.0), std::abs(shallow - 1.0), 1e-6);
      }
    }
  }
  return finish(3, "I_b curvature constant", 60, start, std::move(ck));
}

// ------------------------------------------------------------------ 4

CriterionResult check_ibstar_curvature() {
  const auto start = Clock::now();
  Checks ck;
  const std::vector<Scalar> radii = log_space(1e-12, 1e-6, 16);
  for (int b : {1, 2}) {
    const FiberModel model = FiberModel::standard(KodairaType::Istar(b));
    const std::string tag = "b=" + std::to_string(b);
    const Scalar u = 1e-6;
    ck.near("ratio@1e-6 " + tag, theta_norm_sq(model, u) / asymptotic_curvature_target(model, u), 1.0, 0.15);
    std::vector<Scalar> y;
    for (Scalar r : radii) y.push_back(theta_norm_sq(model, r) * std::pow(std::abs(std::log(r)), 4.0));
    const GrowthFit fit = fit_power_law(radii, y);
    ck.near("u-exponent " + tag, fit.exponent, 4.0, 0.05);
  }
  return finish(4, "I_b* curvature", 60, start, std::move(ck));
}

// ------------------------------------------------------------------ 5

CriterionResult check_flatness(std::uint64_t seed) {
  const auto start = Clock::now();
  Checks ck;
  std::mt19937_64 rng(seed + 5);
  std::vector<FiberModel> flat;
  for (FiberKind k : {FiberKind::II, FiberKind::III, FiberKind::IV})
    for (PoleFlag p : {PoleFlag::Zero, PoleFlag::MinusD}) flat.push_back(FiberModel::standard(KodairaType::of(k), p));
  for (PoleFlag p : {PoleFlag::Zero, PoleFlag::MinusD}) {
    flat.push_back(FiberModel::standard(KodairaType::Istar(0), p));
    FiberModel i0 = FiberModel::standard(KodairaType::I(0), p);
    i0.tau = TauFunction::linear(Complex{0.3, 1.2}, 0.0);
    flat.push_back(i0);
  }
  for (const FiberModel& model : flat) {
    Scalar worst = 0;
    for (int i = 0; i < 1000; ++i) {
      const Complex z = random_base_point(rng, model);
      const Complex w = random_fiber_point(rng, model, z);
      worst = std::max(worst, theta_norm_sq(model, z, w) / curvature_scale(model, z));
    }
    ck.at_most("|Theta|^2/scale " + label(model), worst, 1e-10);
  }
  return finish(5, "flatness of isotrivial models", 10, start, std::move(ck));
}

// ------------------------------------------------------------------ 6

CriterionResult check_volume_growth() {
  const auto start = Clock::now();
  Checks ck;
  const std::vector<Scalar> s = log_space(1e2, 1e6, 16);
  for (auto [t, target] : {std::pair{KodairaType::I(1), 4.0 / 3.0}, std::pair{KodairaType::Istar(1), 2.0}}) {
    const BaseMetric base(FiberModel::standard(t));
    std::vector<Scalar> v;
    for (Scalar x : s) v.push_back(ball_volume(base, x));
    const GrowthFit fit = fit_power_law(s, v);
    ck.near("exponent " + t.name(), fit.exponent, target, 0.05);
    ck.at_most("fit 1-R^2 " + t.name(), 1.0 - fit.r_squared, 1.0 - GrowthFit::kMinRSquared);
  }
  return finish(6, "volume growth", 30, start, std::move(ck));
}

// ------------------------------------------------------------------ 7

CriterionResult check_injectivity() {
  const auto start = Clock::now();
  Checks ck;
  const std::vector<Scalar> s = log_space(1e2, 1e6, 16);
  const InjectivityScan i1 = injectivity_proxy_scan(FiberModel::standard(KodairaType::I(1)), s);
  const InjectivityScan i1s = injectivity_proxy_scan(FiberModel::standard(KodairaType::Istar(1)), s);
  ck.near("shortest loop I_1 vs r", i1.shortest.exponent, -1.0 / 3.0, 0.03);
  ck.near("diameter I_1 vs r", i1.diameter.exponent, 1.0 / 3.0, 0.03);
  ck.holds("I_1* fitted against log r", i1s.against_log_r);
  ck.near("shortest loop I_1* vs log r", i1s.shortest.exponent, -0.5, 0.05);
  for (const auto* f : {&i1.shortest, &i1.diameter, &i1s.shortest})
    ck.at_most("fit 1-R^2", 1.0 - f->r_squared, 1.0 - GrowthFit::kMinRSquared);
  return finish(7, "injectivity proxies", 30, start, std::move(ck));
}

// ------------------------------------------------------------------ 8

CriterionResult check_alh() {
  const auto start = Clock::now();
  Checks ck;
  FiberModel a = FiberModel::standard(KodairaType::I(0));
  a.tau = TauFunction::linear(kI, Complex{0.25, 0.0});
  FiberModel b = FiberModel::standard(KodairaType::I(0));
  b.tau = TauFunction::exponential(Complex{0.0, 1.5});
  b.k = {Complex{2.0, 0.0}};
  b.epsilon = 0.5;
  int idx = 0;
  for (const FiberModel* m : {&a, &b}) {
    const std::string tag = "config " + std::to_string(++idx);
    const AlhScan scan = alh_decay(*m);
    ck.near("rate " + tag, scan.rate, scan.target_rate, 0.05 * scan.target_rate);
    ck.at_most("circle length rel err " + tag, std::abs(scan.circle_length / scan.circle_target - 1.0), 1e-12);
  }
  return finish(8, "ALH convergence", 30, start, std::move(ck));
}

// ------------------------------------------------------------------ 9

CriterionResult check_weil_petersson() {
  const auto start = Clock::now();
  Checks ck;
  FiberModel a = FiberModel::standard(KodairaType::I(0));
  a.tau = TauFunction::linear(Complex{0.0, 0.5}, Complex{0.4, 0.0});
  FiberModel b = FiberModel::standard(KodairaType::I(0));
  b.tau = TauFunction::exponential(Complex{0.0, 1.5});
  // Points where the truncation error sits well above round-off at step/4.
  const std::vector<std::vector<Complex>> pts{{{0.1, -0.6}, {0.2, -0.55}}, {{0.0, 0.7}, {0.3, -0.7}}};
  int idx = 0;
  for (const FiberModel* m : {&a, &b}) {
    ++idx;
    for (Complex z : pts[idx - 1]) {
      char tag[64];
      std::snprintf(tag, sizeof tag, "tau%d z=(%g,%g)", idx, z.real(), z.imag());
      const Scalar r0 = wp_residual(*m, z, 1e-3), r1 = wp_residual(*m, z, 5e-4), r2 = wp_residual(*m, z, 2.5e-4);
      ck.at_most(std::string("residual@1e-3 ") + tag, r0, 1e-6);
      ck.near(std::string("order h->h/2 ") + tag, std::log2(r0 / r1), 2.0, 0.2);
      ck.near(std::string("order h/2->h/4 ") + tag, std::log2(r1 / r2), 2.0, 0.2);
    }
  }
  return finish(9, "Weil-Petersson identity", 5, start, std::move(ck));
}

// ------------------------------------------------------------------ 10

CriterionResult check_kahler_ricci(std::uint64_t seed) {
  const auto start = Clock::now();
  Checks ck;
  std::mt19937_64 rng(seed + 10);
  constexpr Scalar kFloor = 1e-9;  // below this relative size the order is not measurable
  for (const FiberModel& model : model_families()) {
    Scalar k_worst = 0, r_worst = 0, k_order = std::numeric_limits<Scalar>::infinity(), r_order = k_order;
    for (int i = 0; i < 100; ++i) {
      const Complex z = random_base_point(rng, model);
      const Complex w = random_fiber_point(rng, model, z);
      const Scalar ks = kahler_scale(model, z, w), rs = ricci_scale(z);
      k_worst = std::max(k_worst, kahler_residual(model, z, w, {1e-4, false}) / ks);
      r_worst = std::max(r_worst, ricci_residual(model, z, {1e-4, false}) / rs);
      const Scalar k1 = kahler_residual(model, z, w, {1e-2, false}) / ks;
      const Scalar k2 = kahler_residual(model, z, w, {5e-3, false}) / ks;
      if (k2 > kFloor) k_order = std::min(k_order, std::log2(k1 / k2));
      const Scalar r1 = ricci_residual(model, z, {1e-2, false}) / rs;
      const Scalar r2 = ricci_residual(model, z, {5e-3, false}) / rs;
      if (r2 > kFloor) r_order = std::min(r_order, std::log2(r1 / r2));
    }
    const std::string tag = label(model);
    ck.at_most("kahler@1e-4 " + tag, k_worst, 1e-6);
    ck.at_most("ricci@1e-4 " + tag, r_worst, 1e-6);
    if (std::isfinite(k_order)) ck.near("kahler order " + tag, k_order, 2.0, 0.2);
    if (std::isfinite(r_order)) ck.near("ricci order " + tag, r_order, 2.0, 0.2);
  }
  return finish(10, "Kahler and Ricci-flat structure", 30, start, std::move(ck));
}

// ------------------------------------------------------------------ 11

CriterionResult check_semiflat_exactness(std::uint64_t seed) {
  const auto start = Clock::now();
  Checks ck;
  std::mt19937_64 rng(seed + 11);
  const std::vector<FiberModel> families = model_families();
  const int per = (100000 + static_cast<int>(families.size()) - 1) / static_cast<int>(families.size());
  Scalar vol = 0, area = 0, mono = 0;
  for (const FiberModel& model : families) {
    for (int i = 0; i < per; ++i) {
      const Complex z = random_base_point(rng, model);
      const Complex w = random_fiber_point(rng, model, z);
      const MetricPoint p = metric_at(model, z, w);
      const Scalar g2 = std::norm(p.g);
      vol = std::max(vol, std::abs(p.A_coeff * p.B_coeff - 0.5 * g2) / (0.5 * g2));
      area = std::max(area, std::abs(fiber_flat_data(model, z).area / model.epsilon - 1.0));
      if (i < 50) mono = std::max(mono, monodromy_consistency(model, z));
    }
  }
  ck.at_most("A B vs |g|^2/2 rel", vol, 1e-14);
  ck.at_most("fiber area vs eps rel", area, 1e-14);
  ck.at_most("monodromy consistency", mono, 1e-12);
  return finish(11, "semi-flat exactness", 20, start, std::move(ck));
}

// ------------------------------------------------------------------ 12

CriterionResult check_monge_ampere() {
  const auto start = Clock::now();
  Checks ck;
  Scalar mass = 0;
  const ConvergenceStudy study = manufactured_convergence(2, {8, 16, 32});
  ck.near("order m=2 n=8,16,32", study.order, 2.0, 0.2);
  for (const Solution& s : study.solutions) mass = std::max(mass, mass_identity_defect(s.u));

  for (Scalar eps : {1.0, 0.5, 0.1}) {
    const TorusGrid f = sinusoidal_data(2, 16, 0.5);
    TorusProblem p{f, eps};
    const Solution s = solve_perturbed(p);
    char tag[32];
    std::snprintf(tag, sizeof tag, "eps=%g", eps);
    ck.at_most(std::string("max principle ") + tag, s.u.max_abs(), f.max_abs() / eps, p.newton_tol);
    ck.at_most(std::string("residual ") + tag, s.residual_inf, p.newton_tol);
  }

  const Normalized nf = normalize_compatibility(sinusoidal_data(1, 64, 0.4));
  const Solution newton = solve_cma(TorusProblem{nf.f});
  const TorusGrid exact = solve_linearized(nf.f);
  Scalar diff = 0;
  for (std::size_t i = 0; i < exact.size(); ++i) diff = std::max(diff, std::abs(newton.u[i] - exact[i]));
  ck.at_most("m=1 Newton vs linear solve", diff, 1e-10);
  mass = std::max(mass, mass_identity_defect(newton.u));
  ck.at_most("mass identity defect", mass, 1e-13);
  return finish(12, "Monge-Ampere solver", 120, start, std::move(ck));
}

// ------------------------------------------------------------------ 13

CriterionResult check_sobolev() {
  const auto start = Clock::now();
  Checks ck;
  for (auto [beta, alpha] : {std::pair{4, 2.0}, std::pair{3, 3.0}}) {
    const SobolevReport rep = sobolev_probe(beta, alpha, default_profiles());
    char tag[48];
    std::snprintf(tag, sizeof tag, "beta=%d alpha=%g", beta, alpha);
    ck.holds(std::string("finite sup ratio ") + tag, std::isfinite(rep.sup_ratio) && rep.sup_ratio > 0);
    ck.at_most(std::string("dilation factor ") + tag, rep.dilation_factor, 4.0);
  }
  return finish(13, "weighted Sobolev probe", 10, start, std::move(ck));
}

// ------------------------------------------------------------------ driver

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  const std::vector<TableRow>& registry = opt.registry ? *opt.registry : table_registry();
  auto want = [&](int id) { return opt.only.empty() || opt.only.count(id) > 0; };
  std::vector<CriterionResult> out;
  auto run = [&](int id, auto&& fn) {
    if (!want(id)) return;
    try {
      out.push_back(fn());
    } catch (const std::exception& e) {
      CriterionResult r;
      r.id = id;
      r.name = "criterion " + std::to_string(id);
      r.worst = std::string("exception: ") + e.what();
      r.measured = std::numeric_limits<Scalar>::quiet_NaN();
      out.push_back(r);
    }
  };
  run(1, [&] { return check_golden_table(registry, opt.seed); });
  run(2, [] { return check_cone_angles(); });
  run(3, [] { return check_ib_curvature(); });
  run(4, [] { return check_ibstar_curvature(); });
  run(5, [&] { return check_flatness(opt.seed); });
  run(6, [] { return check_volume_growth(); });
  run(7, [] { return check_injectivity(); });
  run(8, [] { return check_alh(); });
  run(9, [] { return check_weil_petersson(); });
  run(10, [&] { return check_kahler_ricci(opt.seed); });
  run(11, [&] { return check_semiflat_exactness(opt.seed); });
  run(12, [] { return check_monge_ampere(); });
  run(13, [] { return check_sobolev(); });
  return out;
}

std::string format_result(const CriterionResult& r) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s %2d %-32s measured=%.10g target=%s%.10g tol=%.3g  worst: %s  [%.2f s / %g s]",
                r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.measured, r.upper_bound ? "<=" : "", r.target,
                r.tolerance, r.worst.c_str(), r.seconds, r.time_limit);
  return buf;
}

std::string results_json(const std::vector<CriterionResult>& results) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  auto num = [](Scalar x) { return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr); };
  bool all = true;
  for (const CriterionResult& r : results) {
    all = all && r.pass;
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["name"] = r.name;
    j["pass"] = r.pass;
    j["measured"] = num(r.measured);
    j["target"] = num(r.target);
    j["tolerance"] = num(r.tolerance);
    j["comparison"] = r.upper_bound ? "upper_bound" : "abs_diff";
    j["worst"] = r.worst;
    j["time_limit_s"] = r.time_limit;
    nlohmann::ordered_json subs = nlohmann::ordered_json::array();
    for (const SubCheck& c : r.checks) {
      if (c.name == "runtime_s") continue;
      subs.push_back({{"name", c.name},
                      {"pass", c.pass},
                      {"measured", num(c.measured)},
                      {"target", num(c.target)},
                      {"tolerance", num(c.tolerance)}});
    }
    j["checks"] = subs;
    arr.push_back(j);
  }
  nlohmann::ordered_json top;
  top["all_pass"] = all;
  top["criteria"] = arr;
  return top.dump(2);
}

}  // namespace sflab
