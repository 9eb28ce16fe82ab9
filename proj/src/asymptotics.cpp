#include "sflab/asymptotics.hpp"

#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "sflab/semiflat.hpp"

namespace sflab {

namespace {

bool finite_type(const KodairaType& t) { return t.kind != FiberKind::I && t.kind != FiberKind::Istar; }

constexpr Scalar kQuadTol = 1e-8;

template <class F>
Scalar integrate(F&& f, Scalar a, Scalar b) {
  if (a == b) return 0.0;
  Scalar err = 0;
  const Scalar v = boost::math::quadrature::gauss_kronrod<Scalar, 61>::integrate(f, a, b, 15, 1e-11, &err);
  if (!std::isfinite(v) || err > kQuadTol * std::abs(v)) throw NumericalFailure("radial quadrature did not converge");
  return v;
}

}  // namespace

BaseMetric::BaseMetric(FiberModel model) : model_(std::move(model)) {
  model_.validate();
  const KodairaType& t = model_.type;
  const bool i0_like = !finite_type(t) && t.b == 0;
  radial_ = model_.k_constant() && !(i0_like && !model_.tau->constant);
  log_prefactor_ = std::log(2.0 * model_.alpha * std::norm(model_.k0()) / model_.epsilon);
  q_ = pole_order(model_);
}

Scalar BaseMetric::conformal_factor(Complex z) const { return 2.0 * metric_at(model_, z, 0.0).A_coeff; }

Scalar BaseMetric::angular_extent() const { return model_.uses_u_coordinate() ? kPi : 2.0 * kPi; }

Scalar BaseMetric::max_ell() const { return finite_type(model_.type) ? 400.0 : 1e6; }

Scalar BaseMetric::log_lambda_t2(Scalar ell) const {
  if (!radial_) throw InputError("base metric is not radial for " + model_.describe());
  if (!(ell > 0.0) || ell > max_ell()) throw InputError("radius outside the supported range");
  const KodairaType& t = model_.type;
  Scalar log_p = 0;
  if (finite_type(t)) {
    const Scalar p = generators_log(model_, Complex{-ell, 0.0}).pairing;
    if (!(p > 0.0)) throw NumericalFailure("pairing underflowed");
    log_p = std::log(p);
  } else if (t.b > 0) {
    const Scalar c = t.kind == FiberKind::I ? 2.0 * kPi : kPi;
    log_p = std::log(t.b * ell / c);
  } else {
    log_p = std::log(model_.tau->at0().imag());
    if (t.kind == FiberKind::Istar) log_p -= ell;
  }
  return log_prefactor_ + (2.0 * q_ - 2.0) * ell + log_p;
}

Scalar BaseMetric::log_lambda_t2_slope(Scalar ell) const {
  if (!radial_) throw InputError("base metric is not radial for " + model_.describe());
  const KodairaType& t = model_.type;
  const Scalar base = 2.0 * q_ - 2.0;
  if (!finite_type(t)) {
    if (t.b > 0) return base + 1.0 / ell;
    return t.kind == FiberKind::Istar ? base - 1.0 : base;
  }
  const Scalar h = 1e-3 * std::max(1.0, ell);
  auto d = [&](Scalar s) { return (log_lambda_t2(ell + s) - log_lambda_t2(ell - s)) / (2.0 * s); };
  return (4.0 * d(0.5 * h) - d(h)) / 3.0;
}

Scalar radial_distance_log(const BaseMetric& base, Scalar ell0, Scalar ell1) {
  if (!(ell0 > 0.0) || ell1 < ell0) throw InputError("need 0 < r1 <= r0 < 1");
  return integrate([&](Scalar l) { return std::exp(0.5 * base.log_lambda_t2(l)); }, ell0, ell1);
}

Scalar radial_distance(const BaseMetric& base, Scalar r0, Scalar r1) {
  if (!(r1 > 0.0) || r1 > r0 || !(r0 < 1.0)) throw InputError("need 0 < r1 <= r0 < 1");
  return radial_distance_log(base, -std::log(r0), -std::log(r1));
}

Scalar ell_at_distance(const BaseMetric& base, Scalar s) {
  if (!(s > 0.0)) throw InputError("distance must be positive");
  const Scalar ell0 = -std::log(kBaseRadius), top = base.max_ell();
  auto dist = [&](Scalar l) { return radial_distance_log(base, ell0, l); };
  Scalar lo = ell0, hi = ell0 + 1.0;
  Scalar d_lo = 0.0;
  while (true) {
    const Scalar d = dist(hi);
    if (d >= s) break;
    if (hi >= top) return top;
    lo = hi;
    d_lo = d;
    hi = std::min(top, ell0 + 2.0 * (hi - ell0));
  }
  // Distance from lo onward, so each bisection step integrates a short piece.
  auto f = [&](Scalar l) { return d_lo + radial_distance_log(base, lo, l) - s; };
  const auto bracket = boost::math::tools::bisect(f, lo, hi, boost::math::tools::eps_tolerance<Scalar>(34));
  return 0.5 * (bracket.first + bracket.second);
}

Scalar ball_volume(const BaseMetric& base, Scalar s) {
  const Scalar ell0 = -std::log(kBaseRadius);
  const Scalar ell_s = ell_at_distance(base, s);
  const Scalar area = integrate([&](Scalar l) { return std::exp(base.log_lambda_t2(l)); }, ell0, ell_s);
  return base.model().epsilon * base.angular_extent() * area;
}

Scalar cone_angle_numeric(const BaseMetric& base, Scalar r) {
  if (!(r > 0.0) || !(r < 1.0)) throw InputError("radius must lie in (0, 1)");
  const Scalar ell = -std::log(r);
  const Scalar scale = base.angular_extent() / (2.0 * kPi) * 0.5;
  const Scalar theta = scale * std::abs(base.log_lambda_t2_slope(ell));
  if (theta == 0.0) return 0.0;
  const Scalar ell2 = std::min(2.0 * ell, base.max_ell());
  const Scalar theta2 = scale * std::abs(base.log_lambda_t2_slope(ell2));
  if (ell2 > ell && theta2 <= 0.6 * theta) return 0.0;
  return theta;
}

InjectivityScan injectivity_proxy_scan(const FiberModel& model, const std::vector<Scalar>& radii) {
  const KodairaType& t = model.type;
  if (finite_type(t) || t.b == 0) throw InputError("injectivity scans need an I_b or I_b* model with b > 0");
  const BaseMetric base(model);
  InjectivityScan scan;
  scan.against_log_r = t.kind == FiberKind::Istar;
  std::vector<Scalar> shortest, diameter, log_r;
  for (Scalar r : radii) {
    const Scalar ell = ell_at_distance(base, r);
    if (ell >= base.max_ell()) throw InputError("distance beyond the supported range");
    const FiberFlatData d = fiber_flat_data_log(model, Complex{-ell, 0.0});
    scan.ell.push_back(ell);
    shortest.push_back(d.shortest_vector);
    diameter.push_back(d.diameter_proxy);
    log_r.push_back(std::log(r));
  }
  scan.shortest = fit_power_law(scan.against_log_r ? log_r : radii, shortest);
  scan.diameter = fit_power_law(radii, diameter);
  return scan;
}

Scalar alh_mu(const FiberModel& model) {
  const KodairaType& t = model.type;
  if (t.kind != FiberKind::I || t.b != 0 || model.pole != PoleFlag::MinusD)
    throw InputError("ALH analysis needs an I_0 model with pole flag minus-D");
  model.validate();
  return std::sqrt(model.alpha) * std::abs(model.k0()) * std::sqrt(2.0 * model.tau->at0().imag());
}

Scalar alh_deviation(const FiberModel& model, Scalar t) {
  const Scalar mu = alh_mu(model);
  const TauFunction& tau = *model.tau;
  const Scalar eps = model.epsilon, alpha = model.alpha;
  const Scalar im0 = tau.at0().imag();
  const Scalar B0 = eps / (2.0 * im0);
  const Scalar radius = std::exp(-std::sqrt(eps) * t / mu);
  const Scalar jac = std::sqrt(eps) / mu * radius;  // |dz/du|
  const Complex k0 = model.k0();
  constexpr int kAngles = 16, kCell = 5;
  Scalar worst = 0;
  for (int j = 0; j < kAngles; ++j) {
    const Complex z = std::polar(radius, 2.0 * kPi * j / kAngles);
    const Complex tz = tau.value(z), dtau = tau.difference(z);
    const Scalar P = tz.imag();
    Complex tail{0.0, 0.0};  // k(z) - k(0)
    for (std::size_t i = model.k.size(); i-- > 1;) tail = (tail + model.k[i]) * z;
    const Scalar dk2 = (tail * std::conj(2.0 * k0 + tail)).real();
    const Scalar B = eps / (2.0 * P);
    const Scalar base_dev = 2.0 * alpha * (dk2 * P + std::norm(k0) * dtau.imag()) / (mu * mu);
    worst = std::max(worst, std::abs(dtau.imag()) / P);
    for (int a = 0; a < kCell; ++a) {
      for (int b = 0; b < kCell; ++b) {
        const Complex w = static_cast<Scalar>(a) / (kCell - 1) + static_cast<Scalar>(b) / (kCell - 1) * tz;
        const Scalar G = std::abs(gamma(model, z, w));
        worst = std::max(worst, std::abs(base_dev + 2.0 * B * G * G * jac * jac));
        worst = std::max(worst, B * G * jac / std::sqrt(0.5 * B0));
      }
    }
  }
  return worst;
}

AlhScan alh_decay(const FiberModel& model, std::vector<Scalar> t_samples) {
  AlhScan scan;
  scan.mu = alh_mu(model);
  const Scalar eps = model.epsilon;
  scan.target_rate = std::sqrt(eps) / scan.mu;
  scan.circle_target = 2.0 * kPi * scan.mu / std::sqrt(eps);
  const Scalar r = 1e-15;
  scan.circle_length = 2.0 * kPi * r * std::sqrt(2.0 * metric_at(model, Complex{r, 0.0}, 0.0).A_coeff);
  if (t_samples.empty()) t_samples = lin_space(5.0 * scan.mu, 40.0 * scan.mu, 16);
  scan.t = t_samples;
  bool any_zero = false;
  for (Scalar t : t_samples) {
    const Scalar d = alh_deviation(model, t);
    any_zero = any_zero || d == 0.0;
    scan.deviation.push_back(d);
  }
  scan.strictly_decreasing = true;
  for (std::size_t i = 1; i < scan.deviation.size(); ++i)
    if (!(scan.deviation[i] < scan.deviation[i - 1])) scan.strictly_decreasing = false;
  if (any_zero) {
    scan.rate = std::numeric_limits<Scalar>::quiet_NaN();
    return scan;
  }
  scan.fit = fit_exponential(t_samples, scan.deviation);
  scan.rate = -scan.fit.exponent;
  return scan;
}

}  // namespace sflab
