#include "sflab/fiber_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sflab {

std::string to_string(PoleFlag p) { return p == PoleFlag::Zero ? "zero" : "minus-D"; }

// ---------------------------------------------------------------- TauFunction

TauFunction TauFunction::linear(Complex tau0, Complex slope) {
  TauFunction t;
  t.value = [=](Complex z) { return tau0 + slope * z; };
  t.d1 = [=](Complex) { return slope; };
  t.d2 = [](Complex) { return Complex{0.0, 0.0}; };
  t.delta = [=](Complex z) { return slope * z; };
  t.constant = slope == Complex{0.0, 0.0};
  return t;
}

TauFunction TauFunction::exponential(Complex scale) {
  TauFunction t;
  t.value = [=](Complex z) { return scale * std::exp(z); };
  t.d1 = t.value;
  t.d2 = t.value;
  t.delta = [=](Complex z) {
    const Scalar x = z.real(), y = z.imag();
    const Scalar s = std::sin(0.5 * y);
    const Complex em1{std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
    return scale * em1;
  };
  return t;
}

// ---------------------------------------------------------------- FiberModel

Complex FiberModel::k_at(Complex z) const {
  Complex acc{0.0, 0.0};
  for (auto it = k.rbegin(); it != k.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Complex FiberModel::dk_at(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = k.size(); j-- > 1;) acc = acc * z + static_cast<Scalar>(j) * k[j];
  return acc;
}

Complex FiberModel::d2k_at(Complex z) const {
  Complex acc{0.0, 0.0};
  for (std::size_t j = k.size(); j-- > 2;) acc = acc * z + static_cast<Scalar>(j * (j - 1)) * k[j];
  return acc;
}

bool FiberModel::k_constant() const {
  return std::all_of(k.begin() + 1, k.end(), [](Complex c) { return c == Complex{0.0, 0.0}; });
}

namespace {

bool is_I0_like(const KodairaType& t) {
  return (t.kind == FiberKind::I || t.kind == FiberKind::Istar) && t.b == 0;
}

bool is_finite_elliptic(FiberKind k) { return k != FiberKind::I && k != FiberKind::Istar; }

}  // namespace

bool FiberModel::isotrivial() const {
  if (is_finite_elliptic(type.kind)) return !m.has_value();
  if (is_I0_like(type)) return tau && tau->constant;
  return false;
}

void FiberModel::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InputError("alpha must be positive");
  if (k.empty() || k0() == Complex{0.0, 0.0}) throw InputError("k(0) must be nonzero");
  for (Complex c : k)
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw InputError("k coefficients must be finite");
  if (type.has_b() && type.b < 0) throw InputError("b must be non-negative");
  if (is_I0_like(type)) {
    if (!tau) throw InputError(type.name() + " requires a tau function");
    if (!(tau->at0().imag() > 0.0)) throw InputError("tau(0) must lie in the upper half plane");
  }
  if (m) {
    if (*m <= 0) throw InputError("j-multiplicity m must be positive");
    const int r3 = *m % 3;
    switch (type.kind) {
      case FiberKind::II:
      case FiberKind::IVstar:
        if (r3 != 1) throw InputError(type.name() + " requires m = 1 mod 3");
        break;
      case FiberKind::IIstar:
      case FiberKind::IV:
        if (r3 != 2) throw InputError(type.name() + " requires m = 2 mod 3");
        break;
      case FiberKind::III:
      case FiberKind::IIIstar:
        if (*m % 2 != 1) throw InputError(type.name() + " requires odd m");
        break;
      default:
        throw InputError("m is only meaningful for II, III, IV and their duals");
    }
  }
}

std::string FiberModel::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << type.name() << " m=" << (m ? std::to_string(*m) : std::string("inf")) << " epsilon=" << epsilon
     << " k0=" << k0().real() << (k0().imag() < 0 ? "" : "+") << k0().imag() << "i"
     << " pole=" << to_string(pole) << " alpha=" << alpha;
  return os.str();
}

FiberModel FiberModel::standard(KodairaType t, PoleFlag pole) {
  FiberModel model;
  model.type = t;
  model.pole = pole;
  if (is_I0_like(t)) model.tau = TauFunction::linear(kI, Complex{0.0, 0.0});
  return model;
}

// ---------------------------------------------------------------- generators

namespace {

const Complex kZeta3 = std::polar(1.0, 2.0 * kPi / 3.0);

Complex power(Complex log_z, Scalar p) { return std::exp(p * log_z); }

struct EllipticShape {
  Scalar e;      // leading exponent
  Scalar q;      // exponent of x = z^q, per unit of m
  Complex c2;    // tau2 = c2 (1 - s2 x) z^e
  Complex s2;
};

EllipticShape elliptic_shape(FiberKind k) {
  switch (k) {
    case FiberKind::II: return {5.0 / 6.0, 1.0 / 3.0, kZeta3, kZeta3};
    case FiberKind::IVstar: return {1.0 / 3.0, 1.0 / 3.0, kZeta3, kZeta3};
    case FiberKind::IIstar: return {1.0 / 6.0, 1.0 / 3.0, kZeta3, kZeta3};
    case FiberKind::IV: return {2.0 / 3.0, 1.0 / 3.0, kZeta3, kZeta3};
    case FiberKind::III: return {3.0 / 4.0, 1.0 / 2.0, kI, Complex{-1.0, 0.0}};
    case FiberKind::IIIstar: return {1.0 / 4.0, 1.0 / 2.0, kI, Complex{-1.0, 0.0}};
    default: throw InputError("not a finite elliptic type");
  }
}

// c (z^e - s z^(e+q)) and its first two derivatives.
void twisted_power(Complex log_z, Scalar e, std::optional<Scalar> q, Complex c, Complex s, Complex& f,
                   Complex& df, Complex& d2f) {
  f = power(log_z, e);
  df = e * power(log_z, e - 1.0);
  d2f = e * (e - 1.0) * power(log_z, e - 2.0);
  if (q) {
    const Scalar p = e + *q;
    f -= s * power(log_z, p);
    df -= s * p * power(log_z, p - 1.0);
    d2f -= s * p * (p - 1.0) * power(log_z, p - 2.0);
  }
  f *= c;
  df *= c;
  d2f *= c;
}

Complex tau_checked(const TauFunction& tau, Complex z) {
  const Complex t = tau.value(z);
  if (!(t.imag() > 0.0)) throw InputError("tau(z) left the upper half plane");
  return t;
}

void finish(PeriodSample& s) { s.pairing = (std::conj(s.tau1) * s.tau2).imag(); }

PeriodSample evaluate(const FiberModel& model, Complex log_z, bool table_form) {
  PeriodSample s;
  const KodairaType& t = model.type;
  if (is_finite_elliptic(t.kind)) {
    const EllipticShape sh = elliptic_shape(t.kind);
    std::optional<Scalar> q;
    if (model.m) q = sh.q * *model.m;
    twisted_power(log_z, sh.e, q, 1.0, 1.0, s.tau1, s.dtau1, s.d2tau1);
    twisted_power(log_z, sh.e, q, sh.c2, sh.s2, s.tau2, s.dtau2, s.d2tau2);
  } else if (t.b == 0) {
    if (!model.tau) throw InputError(t.name() + " requires a tau function");
    const TauFunction& tau = *model.tau;
    const Complex z = std::exp(log_z);
    const Complex tv = tau_checked(tau, z), t1 = tau.d1(z);
    const Complex t2 = tau.d2 ? tau.d2(z) : Complex{std::nan(""), std::nan("")};
    if (t.kind == FiberKind::I) {
      s.tau1 = 1.0;
      s.dtau1 = s.d2tau1 = 0.0;
      s.tau2 = tv;
      s.dtau2 = t1;
      s.d2tau2 = t2;
    } else {
      const Complex r = power(log_z, 0.5), rm = power(log_z, -0.5), rmm = power(log_z, -1.5);
      s.tau1 = r;
      s.dtau1 = 0.5 * rm;
      s.d2tau1 = -0.25 * rmm;
      s.tau2 = r * tv;
      s.dtau2 = 0.5 * rm * tv + r * t1;
      s.d2tau2 = -0.25 * rmm * tv + rm * t1 + r * t2;
    }
  } else if (t.kind == FiberKind::I) {
    const Complex c = static_cast<Scalar>(t.b) / (2.0 * kPi * kI);
    s.tau1 = 1.0;
    s.dtau1 = s.d2tau1 = 0.0;
    s.tau2 = c * log_z;
    s.dtau2 = c * std::exp(-log_z);
    s.d2tau2 = -c * std::exp(-2.0 * log_z);
  } else if (!table_form) {
    // I_b* in u: log_z is log u here.
    const Complex c = static_cast<Scalar>(t.b) / (kPi * kI);
    s.tau1 = 1.0;
    s.dtau1 = s.d2tau1 = 0.0;
    s.tau2 = c * log_z;
    s.dtau2 = c * std::exp(-log_z);
    s.d2tau2 = -c * std::exp(-2.0 * log_z);
  } else {
    const Complex c = static_cast<Scalar>(t.b) / (2.0 * kPi * kI);
    const Complex r = power(log_z, 0.5), rm = power(log_z, -0.5), rmm = power(log_z, -1.5);
    s.tau1 = r;
    s.dtau1 = 0.5 * rm;
    s.d2tau1 = -0.25 * rmm;
    s.tau2 = c * r * log_z;
    s.dtau2 = c * (0.5 * rm * log_z + rm);
    s.d2tau2 = -0.25 * c * rmm * log_z;
  }
  finish(s);
  return s;
}

Complex checked_log(Complex z, int winding) {
  if (z == Complex{0.0, 0.0}) throw InputError("base point must be nonzero");
  if (!(std::abs(z) < 1.0)) throw InputError("base point must lie in the unit disk");
  if (winding == 0 && z.imag() == 0.0 && z.real() < 0.0)
    throw InputError("base point lies on the branch cut; pass a winding count");
  return std::log(z) + Complex{0.0, 2.0 * kPi * winding};
}

}  // namespace

PeriodSample generators(const FiberModel& model, Complex z, int winding) {
  return evaluate(model, checked_log(z, winding), false);
}

PeriodSample generators_log(const FiberModel& model, Complex log_z) {
  if (!(log_z.real() < 0.0)) throw InputError("log z must have negative real part");
  return evaluate(model, log_z, false);
}

PeriodSample table_generators(const FiberModel& model, Complex z, int winding) {
  return evaluate(model, checked_log(z, winding), true);
}

// ---------------------------------------------------------------- N, angles, g

int multiplicity_N(const FiberModel& model) {
  const KodairaType& t = model.type;
  return t.kind == FiberKind::I ? 0 : 1;
}

ConeAngles cone_angles(const KodairaType& t) {
  switch (t.kind) {
    case FiberKind::I: return {1.0, 0.0};
    case FiberKind::Istar: return {0.5, 0.5};
    case FiberKind::II: return {5.0 / 6.0, 1.0 / 6.0};
    case FiberKind::IVstar: return {1.0 / 3.0, 2.0 / 3.0};
    case FiberKind::IIstar: return {1.0 / 6.0, 5.0 / 6.0};
    case FiberKind::IV: return {2.0 / 3.0, 1.0 / 3.0};
    case FiberKind::III: return {3.0 / 4.0, 1.0 / 4.0};
    case FiberKind::IIIstar: return {1.0 / 4.0, 3.0 / 4.0};
  }
  throw InputError("unknown fiber kind");
}

ConeAngles cone_angles(const FiberModel& model) { return cone_angles(model.type); }

int pole_order(const FiberModel& model) {
  if (model.uses_u_coordinate()) return model.pole == PoleFlag::MinusD ? 2 : 0;
  const int N = multiplicity_N(model);
  return model.pole == PoleFlag::MinusD ? N + 1 : N;
}

Complex volume_density_g(const FiberModel& model, Complex z) {
  if (z == Complex{0.0, 0.0}) throw InputError("g is singular at z = 0");
  const int q = pole_order(model);
  const Complex kk = model.uses_u_coordinate() ? model.k_at(z * z) : model.k_at(z);
  return std::sqrt(model.alpha) * kk * std::pow(z, -q);
}

Complex volume_density_dg(const FiberModel& model, Complex z) {
  if (z == Complex{0.0, 0.0}) throw InputError("g is singular at z = 0");
  const int q = pole_order(model);
  Complex kk, dkk;
  if (model.uses_u_coordinate()) {
    kk = model.k_at(z * z);
    dkk = 2.0 * z * model.dk_at(z * z);
  } else {
    kk = model.k_at(z);
    dkk = model.dk_at(z);
  }
  return std::sqrt(model.alpha) * (dkk * std::pow(z, -q) - static_cast<Scalar>(q) * kk * std::pow(z, -q - 1));
}

Scalar monodromy_consistency(const FiberModel& model, Complex z) {
  const PeriodSample s0 = table_generators(model, z, 0);
  const PeriodSample s1 = table_generators(model, z, 1);
  const IntMatrix2 A = representative(model.type);
  const Complex e1 = s0.tau1 * static_cast<Scalar>(A.a()) + s0.tau2 * static_cast<Scalar>(A.c());
  const Complex e2 = s0.tau1 * static_cast<Scalar>(A.b()) + s0.tau2 * static_cast<Scalar>(A.d());
  const Scalar scale = std::max(std::abs(s0.tau1), std::abs(s0.tau2));
  return std::max(std::abs(s1.tau1 - e1), std::abs(s1.tau2 - e2)) / scale;
}

// ---------------------------------------------------------------- table

const std::vector<TableRow>& table_registry() {
  static const std::vector<TableRow> rows = [] {
    auto row = [](std::string j0, std::string mult, int sign, std::string matrix, Order ord, KodairaType t,
                  std::string gens, std::string inc, std::string com) {
      auto frac = [](const std::string& s) {
        const auto slash = s.find('/');
        if (slash == std::string::npos) return std::stod(s);
        return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
      };
      const int N = t.kind == FiberKind::I ? 0 : 1;
      return TableRow{j0, mult, sign, matrix, ord, t, gens, N, frac(inc), frac(com), inc, com};
    };
    const Order inf = std::nullopt;
    const std::string g_I0 = "1; tau(z)";
    const std::string g_I0s = "z^(1/2); z^(1/2) tau(z)";
    return std::vector<TableRow>{
        row("not 0/1/inf", "any", +1, "(1 0; 0 1)", 1, KodairaType::I(0), g_I0, "1", "0"),
        row("not 0/1/inf", "any", -1, "(1 0; 0 1)", 2, KodairaType::Istar(0), g_I0s, "1/2", "1/2"),
        row("0", "m = 1 mod 3", +1, "(0 1; -1 1)", 6, KodairaType::of(FiberKind::II),
            "(1 - z^(m/3)) z^(5/6); zeta3 (1 - zeta3 z^(m/3)) z^(5/6)", "5/6", "1/6"),
        row("0", "m = 1 mod 3", -1, "(0 1; -1 1)", 3, KodairaType::of(FiberKind::IVstar),
            "(1 - z^(m/3)) z^(1/3); zeta3 (1 - zeta3 z^(m/3)) z^(1/3)", "1/3", "2/3"),
        row("0", "m = 2 mod 3", +1, "(1 -1; 1 0)", 6, KodairaType::of(FiberKind::IIstar),
            "(1 - z^(m/3)) z^(1/6); zeta3 (1 - zeta3 z^(m/3)) z^(1/6)", "1/6", "5/6"),
        row("0", "m = 2 mod 3", -1, "(1 -1; 1 0)", 3, KodairaType::of(FiberKind::IV),
            "(1 - z^(m/3)) z^(2/3); zeta3 (1 - zeta3 z^(m/3)) z^(2/3)", "2/3", "1/3"),
        row("0", "m = 0 mod 3", +1, "(1 0; 0 1)", 1, KodairaType::I(0), g_I0, "1", "0"),
        row("0", "m = 0 mod 3", -1, "(1 0; 0 1)", 2, KodairaType::Istar(0), g_I0s, "1/2", "1/2"),
        row("1", "m = 1 mod 2", +1, "(0 1; -1 0)", 4, KodairaType::of(FiberKind::III),
            "(1 - z^(m/2)) z^(3/4); i (1 + z^(m/2)) z^(3/4)", "3/4", "1/4"),
        row("1", "m = 1 mod 2", -1, "(0 1; -1 0)", 4, KodairaType::of(FiberKind::IIIstar),
            "(1 - z^(m/2)) z^(1/4); i (1 + z^(m/2)) z^(1/4)", "1/4", "3/4"),
        row("1", "m = 0 mod 2", +1, "(1 0; 0 1)", 1, KodairaType::I(0), g_I0, "1", "0"),
        row("1", "m = 0 mod 2", -1, "(1 0; 0 1)", 2, KodairaType::Istar(0), g_I0s, "1/2", "1/2"),
        row("inf", "-b", +1, "(1 b; 0 1)", inf, KodairaType::I(1), "1; b/(2 pi i) log z", "1", "0"),
        row("inf", "-b", -1, "(1 b; 0 1)", inf, KodairaType::Istar(1),
            "z^(1/2); b/(2 pi i) z^(1/2) log z", "1/2", "1/2"),
    };
  }();
  return rows;
}

}  // namespace sflab
