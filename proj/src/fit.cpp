#include "sflab/fit.hpp"

#include <cmath>

#include <Eigen/Dense>

namespace sflab {

LineFit fit_line(const std::vector<Scalar>& x, const std::vector<Scalar>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InputError("fit needs at least two paired samples");
  const Eigen::Index n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd Y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    X(i, 0) = x[i];
    X(i, 1) = 1.0;
    Y(i) = y[i];
  }
  const Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
  const Eigen::VectorXd resid = Y - X * beta;
  const Scalar ss_res = resid.squaredNorm();
  const Scalar ss_tot = (Y.array() - Y.mean()).square().sum();
  LineFit f;
  f.slope = beta(0);
  f.intercept = beta(1);
  f.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return f;
}

namespace {

GrowthFit fit_growth(const std::vector<Scalar>& scale, const std::vector<Scalar>& value, bool log_scale) {
  if (scale.size() != value.size() || scale.size() < 2) throw InputError("fit needs at least two paired samples");
  std::vector<Scalar> x(scale.size()), y(value.size());
  const bool increasing = scale[1] > scale[0];
  for (std::size_t i = 0; i < scale.size(); ++i) {
    if (i > 0 && (scale[i] > scale[i - 1]) != increasing) throw InputError("fit scales must be strictly monotone");
    if (i > 0 && scale[i] == scale[i - 1]) throw InputError("fit scales must be strictly monotone");
    if (!(value[i] > 0.0)) throw InputError("fit values must be positive");
    if (log_scale && !(scale[i] > 0.0)) throw InputError("power-law scales must be positive");
    x[i] = log_scale ? std::log(scale[i]) : scale[i];
    y[i] = std::log(value[i]);
  }
  const LineFit lf = fit_line(x, y);
  GrowthFit g;
  g.exponent = lf.slope;
  g.intercept = lf.intercept;
  g.r_squared = lf.r_squared;
  for (std::size_t i = 0; i < scale.size(); ++i) g.samples.emplace_back(scale[i], value[i]);
  return g;
}

}  // namespace

GrowthFit fit_power_law(const std::vector<Scalar>& scale, const std::vector<Scalar>& value) {
  return fit_growth(scale, value, true);
}

GrowthFit fit_exponential(const std::vector<Scalar>& scale, const std::vector<Scalar>& value) {
  return fit_growth(scale, value, false);
}

std::vector<Scalar> log_space(Scalar a, Scalar b, int n) {
  if (n < 2 || !(a > 0) || !(b > 0)) throw InputError("log_space needs n >= 2 and positive ends");
  std::vector<Scalar> v(n);
  const Scalar la = std::log(a), lb = std::log(b);
  for (int i = 0; i < n; ++i) v[i] = std::exp(la + (lb - la) * i / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

std::vector<Scalar> lin_space(Scalar a, Scalar b, int n) {
  if (n < 2) throw InputError("lin_space needs n >= 2");
  std::vector<Scalar> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace sflab
