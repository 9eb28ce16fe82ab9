#include "sflab/sobolev.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace sflab {

RadialProfile RadialProfile::hat() {
  return {"hat", [](Scalar r) { return std::max(0.0, 1.0 - r); }, [](Scalar r) { return r < 1.0 ? -1.0 : 0.0; },
          {1.0}};
}

RadialProfile RadialProfile::quartic() {
  return {"quartic",
          [](Scalar r) { return r < 1.0 ? (1.0 - r * r) * (1.0 - r * r) : 0.0; },
          [](Scalar r) { return r < 1.0 ? -4.0 * r * (1.0 - r * r) : 0.0; },
          {1.0}};
}

RadialProfile RadialProfile::cosine() {
  return {"cosine",
          [](Scalar r) {
            const Scalar c = std::cos(0.5 * kPi * r);
            return r < 1.0 ? c * c : 0.0;
          },
          [](Scalar r) { return r < 1.0 ? -0.5 * kPi * std::sin(kPi * r) : 0.0; },
          {1.0}};
}

RadialProfile RadialProfile::plateau() {
  return {"plateau",
          [](Scalar r) { return r < 1.0 ? 1.0 : std::max(0.0, 2.0 - r); },
          [](Scalar r) { return (r >= 1.0 && r < 2.0) ? -1.0 : 0.0; },
          {1.0, 2.0}};
}

RadialProfile RadialProfile::shell() {
  return {"shell",
          [](Scalar r) { return std::max(0.0, 1.0 - std::abs(r - 2.0)); },
          [](Scalar r) {
            if (r <= 1.0 || r >= 3.0) return 0.0;
            return r < 2.0 ? 1.0 : -1.0;
          },
          {1.0, 2.0, 3.0}};
}

RadialProfile RadialProfile::zero() {
  return {"zero", [](Scalar) { return 0.0; }, [](Scalar) { return 0.0; }, {1.0}};
}

std::vector<RadialProfile> default_profiles() {
  return {RadialProfile::hat(), RadialProfile::quartic(), RadialProfile::cosine(), RadialProfile::plateau(),
          RadialProfile::shell()};
}

namespace {

// Integral over [0, R] split at the breakpoints, each piece by adaptive quadrature.
template <class F>
Scalar piecewise(F&& f, const std::vector<Scalar>& cuts) {
  Scalar total = 0, a = 0;
  for (Scalar b : cuts) {
    Scalar err = 0;
    total += boost::math::quadrature::gauss_kronrod<Scalar, 61>::integrate(f, a, b, 15, 1e-12, &err);
    a = b;
  }
  if (!std::isfinite(total)) throw NumericalFailure("profile is not integrable");
  return total;
}

}  // namespace

SobolevReport sobolev_probe(int beta, Scalar alpha, const std::vector<RadialProfile>& family,
                            std::vector<Scalar> dilations) {
  if (beta != 3 && beta != 4) throw InputError("beta must be 3 or 4");
  const Scalar alpha_max = static_cast<Scalar>(beta) / (beta - 2);
  if (!(alpha >= 1.0) || alpha > alpha_max) throw InputError("alpha must lie in [1, beta/(beta-2)]");
  if (family.empty()) throw InputError("empty profile family");
  if (dilations.empty())
    for (int k = -4; k <= 4; ++k) dilations.push_back(std::ldexp(1.0, k));

  SobolevReport rep;
  rep.beta = beta;
  rep.alpha = alpha;
  rep.weight_exponent = alpha * (beta - 2) - beta;
  const Scalar w = rep.weight_exponent;
  const Scalar sphere = 2.0 * std::pow(kPi, 0.5 * beta) / std::tgamma(0.5 * beta);
  const Scalar rb = beta - 1.0;

  for (const RadialProfile& prof : family) {
    if (prof.breakpoints.empty()) throw InputError("profile " + prof.name + " has no support radius");
    Scalar base_ratio = 0;
    std::vector<Scalar> ratios;
    bool excluded = false;
    for (Scalar lam : dilations) {
      if (!(lam > 0.0)) throw InputError("dilations must be positive");
      std::vector<Scalar> cuts;
      for (Scalar b : prof.breakpoints) cuts.push_back(b / lam);
      const Scalar lhs_int = piecewise(
          [&](Scalar r) { return std::pow(std::abs(prof.value(lam * r)), 2.0 * alpha) * std::pow(1.0 + r, w) * std::pow(r, rb); },
          cuts);
      const Scalar rhs = sphere * piecewise(
          [&](Scalar r) {
            const Scalar d = lam * prof.derivative(lam * r);
            return d * d * std::pow(r, rb);
          },
          cuts);
      SobolevRow row;
      row.profile = prof.name;
      row.lambda = lam;
      row.lhs = std::pow(sphere * lhs_int, 1.0 / alpha);
      row.rhs = rhs;
      if (row.lhs == 0.0 && row.rhs == 0.0) {
        row.excluded = true;
        excluded = true;
      } else {
        if (row.rhs == 0.0) throw NumericalFailure("profile " + prof.name + " has zero energy but nonzero mass");
        row.ratio = row.lhs / row.rhs;
        rep.sup_ratio = std::max(rep.sup_ratio, row.ratio);
        ratios.push_back(row.ratio);
        if (lam == 1.0) base_ratio = row.ratio;
      }
      rep.rows.push_back(row);
    }
    if (excluded) {
      rep.excluded.push_back(prof.name);
      continue;
    }
    if (base_ratio == 0.0) base_ratio = ratios.front();
    for (Scalar r : ratios) rep.dilation_factor = std::max({rep.dilation_factor, r / base_ratio, base_ratio / r});
  }
  return rep;
}

}  // namespace sflab
