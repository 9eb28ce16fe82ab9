#include "sflab/curvature.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "sflab/semiflat.hpp"

namespace sflab {

Scalar CurvatureForm::max_abs() const {
  Scalar m = 0;
  for (const auto& c : component) m = std::max(m, c.cwiseAbs().maxCoeff());
  return m;
}

namespace {

using Connection = std::array<Eigen::Matrix2cd, 2>;  // H^-1 dzb H, H^-1 dwb H

Connection closed_connection(const FiberModel& model, Complex z, Complex w) {
  const MetricJet jet = metric_jet(model, z, w);
  const Eigen::Matrix2cd Hinv = jet.H.inverse();
  return {Hinv * jet.dzbar_H, Hinv * jet.dwbar_H};
}

Connection fd_connection(const FiberModel& model, Complex z, Complex w, Scalar hz, Scalar hw) {
  auto H = [&](Complex zz, Complex ww) { return metric_at(model, zz, ww).matrix.matrix(); };
  const Eigen::Matrix2cd H0 = H(z, w);
  const Eigen::Matrix2cd dx = (H(z + hz, w) - H(z - hz, w)) / (2.0 * hz);
  const Eigen::Matrix2cd dy = (H(z + kI * hz, w) - H(z - kI * hz, w)) / (2.0 * hz);
  const Eigen::Matrix2cd du = (H(z, w + hw) - H(z, w - hw)) / (2.0 * hw);
  const Eigen::Matrix2cd dv = (H(z, w + kI * hw) - H(z, w - kI * hw)) / (2.0 * hw);
  const Eigen::Matrix2cd Hinv = H0.inverse();
  return {Hinv * (0.5 * (dx + kI * dy)), Hinv * (0.5 * (du + kI * dv))};
}

// Holomorphic derivatives d_z, d_w of the connection by central differences.
std::array<Connection, 2> differentiate(const std::function<Connection(Complex, Complex)>& conn, Complex z,
                                        Complex w, Scalar hz, Scalar hw) {
  auto diff = [&](Complex dz, Complex dw, Scalar h) {
    const Connection p = conn(z + dz, w + dw), m = conn(z - dz, w - dw);
    return Connection{(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)};
  };
  const Connection dx = diff(hz, 0.0, hz), dy = diff(kI * hz, 0.0, hz);
  const Connection du = diff(0.0, hw, hw), dv = diff(0.0, kI * hw, hw);
  std::array<Connection, 2> out;
  for (int k = 0; k < 2; ++k) {
    out[0][k] = 0.5 * (dx[k] - kI * dy[k]);
    out[1][k] = 0.5 * (du[k] - kI * dv[k]);
  }
  return out;
}

}  // namespace

CurvatureForm chern_curvature(const FiberModel& model, Complex z, Complex w, CurvatureOptions opt) {
  const Scalar hz = opt.step * std::abs(z);
  const Scalar hw = opt.step * fiber_length_scale(model, z);
  std::function<Connection(Complex, Complex)> conn;
  if (opt.mode == DerivativeMode::ClosedForm) {
    conn = [&](Complex zz, Complex ww) { return closed_connection(model, zz, ww); };
  } else {
    const Scalar ihz = opt.inner_step * std::abs(z);
    const Scalar ihw = opt.inner_step * fiber_length_scale(model, z);
    conn = [&, ihz, ihw](Complex zz, Complex ww) { return fd_connection(model, zz, ww, ihz, ihw); };
  }
  const auto coarse = differentiate(conn, z, w, hz, hw);
  const auto fine = differentiate(conn, z, w, 0.5 * hz, 0.5 * hw);
  CurvatureForm theta;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) theta(j, k) = (4.0 * fine[j][k] - coarse[j][k]) / 3.0;
  return theta;
}

Scalar theta_norm_sq(const FiberModel& model, Complex z, CurvatureOptions opt) {
  return theta_norm_sq(model, z, Complex{0.0, 0.0}, opt);
}

Scalar theta_norm_sq(const FiberModel& model, Complex z, Complex w, CurvatureOptions opt) {
  const CurvatureForm theta = chern_curvature(model, z, w, opt);
  const Eigen::Matrix2cd H = metric_at(model, z, w).matrix.matrix();
  const Eigen::Matrix2cd Hinv = H.inverse();
  // R_{a bb c db} = (H Theta_{a bb})(c, d); g^{a eb} = Hinv(e, a).
  std::array<Eigen::Matrix2cd, 4> R;
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) R[2 * j + k] = H * theta(j, k);
  Complex total{0.0, 0.0};
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int e = 0; e < 2; ++e)
        for (int f = 0; f < 2; ++f) {
          const Complex gab = Hinv(e, a) * Hinv(b, f);
          const Eigen::Matrix2cd& X = R[2 * a + b];
          const Eigen::Matrix2cd& Y = R[2 * e + f];
          for (int c = 0; c < 2; ++c)
            for (int d = 0; d < 2; ++d)
              for (int g = 0; g < 2; ++g)
                for (int h = 0; h < 2; ++h) total += gab * Hinv(g, c) * Hinv(d, h) * X(c, d) * std::conj(Y(g, h));
        }
  return total.real();
}

Scalar curvature_scale(const FiberModel& model, Complex z) {
  const Scalar hzz = metric_at(model, z, 0.0).matrix.h_zz;
  const Scalar s = 1.0 / (hzz * std::norm(z));
  return s * s;
}

Scalar asymptotic_curvature_target(const FiberModel& model, Complex z) {
  if (model.pole != PoleFlag::MinusD) return 0.0;
  const KodairaType& t = model.type;
  if (!t.has_b() || t.b == 0) return 0.0;
  const Scalar b = static_cast<Scalar>(t.b), eps = model.epsilon;
  const Scalar k4 = std::pow(model.alpha * std::norm(model.k0()), 2);
  const Scalar L = std::abs(std::log(std::abs(z)));
  if (t.kind == FiberKind::I) return 6.0 * kPi * kPi * eps * eps / (b * b * k4) * std::pow(L, -6.0);
  return kPi * kPi * eps * eps / (2.0 * b * b * k4) * std::pow(std::abs(z), 4.0) * std::pow(L, -4.0);
}

Scalar wp_residual(const FiberModel& model, Complex z, Scalar step) {
  if (model.type.kind != FiberKind::I || model.type.b != 0 || !model.tau)
    throw InputError("wp_residual needs an I_0 model with a tau function");
  const TauFunction& tau = *model.tau;
  if (tau.constant) return 0.0;
  if (!(step > 0.0)) throw InputError("step must be positive");
  auto f = [&](Complex p) {
    const Scalar im = tau.value(p).imag();
    if (!(im > 0.0)) throw InputError("tau left the upper half plane inside the stencil");
    return std::log(im);
  };
  const Scalar h = step;
  const Scalar lap = (f(z + h) + f(z - h) + f(z + kI * h) + f(z - kI * h) - 4.0 * f(z)) / (h * h);
  const Complex d = tau.d1(z);
  const Scalar im = tau.value(z).imag();
  return std::abs(-0.25 * lap - 0.25 * std::norm(d) / (im * im));
}

std::vector<CurvatureSample> curvature_decay_scan(const FiberModel& model, const std::vector<Scalar>& radii,
                                                  CurvatureOptions opt) {
  std::vector<CurvatureSample> rows;
  rows.reserve(radii.size());
  for (Scalar r : radii) {
    CurvatureSample s;
    s.z = Complex{r, 0.0};
    s.theta_norm_sq = theta_norm_sq(model, s.z, opt);
    s.target = asymptotic_curvature_target(model, s.z);
    s.ratio = s.target > 0 ? s.theta_norm_sq / s.target : std::numeric_limits<Scalar>::quiet_NaN();
    rows.push_back(s);
  }
  return rows;
}

}  // namespace sflab
