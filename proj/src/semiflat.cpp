#include "sflab/semiflat.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace sflab {

Eigen::Matrix2cd HermitianMatrix2::matrix() const {
  Eigen::Matrix2cd H;
  H << Complex{h_zz, 0.0}, h_zw, std::conj(h_zw), Complex{h_ww, 0.0};
  return H;
}

Complex gamma(const PeriodSample& s, Complex w) {
  const Scalar im1 = (std::conj(s.tau1) * w).imag();
  const Scalar im2 = (std::conj(s.tau2) * w).imag();
  return (im1 * s.dtau2 - im2 * s.dtau1) / s.pairing;
}

Complex gamma(const FiberModel& model, Complex z, Complex w) { return gamma(generators(model, z), w); }

namespace {

MetricPoint assemble(const FiberModel& model, const PeriodSample& s, Complex g, Complex z, Complex w) {
  MetricPoint p;
  p.z = z;
  p.w = w;
  p.g = g;
  p.gamma = gamma(s, w);
  p.A_coeff = std::norm(g) * s.pairing / model.epsilon;
  p.B_coeff = model.epsilon / (2.0 * s.pairing);
  p.matrix.h_zz = p.A_coeff + p.B_coeff * std::norm(p.gamma);
  p.matrix.h_ww = p.B_coeff;
  p.matrix.h_zw = -p.B_coeff * p.gamma;
  if (!p.matrix.positive()) throw NumericalFailure("semi-flat metric is not positive at z = " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i");
  return p;
}

}  // namespace

MetricPoint metric_at(const FiberModel& model, Complex z, Complex w) {
  return assemble(model, generators(model, z), volume_density_g(model, z), z, w);
}

MetricJet metric_jet(const FiberModel& model, Complex z, Complex w) {
  if (model.tau && !model.tau->d2) throw InputError("closed-form derivatives need tau''; none registered");
  const PeriodSample s = generators(model, z);
  const Complex g = volume_density_g(model, z), dg = volume_density_dg(model, z);
  MetricJet jet;
  jet.point = assemble(model, s, g, z, w);
  const MetricPoint& p = jet.point;
  jet.H = p.matrix.matrix();

  const Scalar eps = model.epsilon, P = s.pairing;
  const Complex two_i{0.0, 2.0};
  const Complex t1 = s.tau1, t2 = s.tau2, d1 = s.dtau1, d2 = s.dtau2;
  const Complex dd1 = s.d2tau1, dd2 = s.d2tau2;
  const Scalar im1 = (std::conj(t1) * w).imag(), im2 = (std::conj(t2) * w).imag();
  const Complex G = p.gamma, Gb = std::conj(G);

  const Complex dzb_P = (std::conj(d1) * t2 - t1 * std::conj(d2)) / two_i;
  const Complex dz_P = std::conj(dzb_P);
  const Complex dzb_g2 = g * std::conj(dg);
  const Complex dzb_A = (dzb_g2 * P + std::norm(g) * dzb_P) / eps;
  const Complex dzb_B = -eps * dzb_P / (2.0 * P * P);

  const Complex dz_G = (im1 * dd2 - im2 * dd1) / P - G * dz_P / P;
  const Complex dw_G = (std::conj(t1) * d2 - std::conj(t2) * d1) / (two_i * P);
  const Complex dzb_G = (std::conj(d1) * w * d2 - std::conj(d2) * w * d1) / (two_i * P) - G * dzb_P / P;
  const Complex dwb_G = (-t1 * d2 + t2 * d1) / (two_i * P);
  const Complex dzb_Gb = std::conj(dz_G);
  const Complex dwb_Gb = std::conj(dw_G);

  const Scalar B = p.B_coeff;
  auto fill = [&](Eigen::Matrix2cd& out, Complex dA, Complex dB, Complex dG, Complex dGb) {
    out(0, 0) = dA + dB * G * Gb + B * (dG * Gb + G * dGb);
    out(0, 1) = -dB * G - B * dG;
    out(1, 0) = -dB * Gb - B * dGb;
    out(1, 1) = dB;
  };
  fill(jet.dzbar_H, dzb_A, dzb_B, dzb_G, dzb_Gb);
  fill(jet.dwbar_H, 0.0, 0.0, dwb_G, dwb_Gb);
  return jet;
}

// ---------------------------------------------------------------- fiber data

void gauss_reduce(Complex& v1, Complex& v2) {
  for (int it = 0; it < 1000; ++it) {
    if (std::norm(v2) < std::norm(v1)) std::swap(v1, v2);
    const Scalar t = (v2 * std::conj(v1)).real() / std::norm(v1);
    if (std::abs(t) <= 0.5 + 1e-12) return;
    v2 -= std::round(t) * v1;
  }
  throw NumericalFailure("lattice reduction did not terminate");
}

namespace {

FiberFlatData flat_data(const FiberModel& model, const PeriodSample& s) {
  const Scalar B = model.epsilon / (2.0 * s.pairing);
  const Scalar scale = std::sqrt(2.0 * B);
  FiberFlatData d;
  d.v1 = s.tau1;
  d.v2 = s.tau2;
  gauss_reduce(d.v1, d.v2);
  d.v1 *= scale;
  d.v2 *= scale;
  d.area = 2.0 * B * s.pairing;
  d.shortest_vector = std::abs(d.v1);
  d.diameter_proxy = 0.5 * (std::abs(d.v1) + std::abs(d.v2));
  return d;
}

}  // namespace

FiberFlatData fiber_flat_data(const FiberModel& model, Complex z) { return flat_data(model, generators(model, z)); }

FiberFlatData fiber_flat_data_log(const FiberModel& model, Complex log_z) {
  return flat_data(model, generators_log(model, log_z));
}

Scalar fiber_length_scale(const FiberModel& model, Complex z) {
  const PeriodSample s = generators(model, z);
  Complex v1 = s.tau1, v2 = s.tau2;
  gauss_reduce(v1, v2);
  return std::abs(v1);
}

// ---------------------------------------------------------------- residuals

namespace {

template <class F>
auto richardson(F&& estimate, const FdOptions& fd) {
  auto coarse = estimate(fd.step);
  if (!fd.richardson) return coarse;
  auto fine = estimate(0.5 * fd.step);
  return decltype(coarse)((4.0 * fine - coarse) / 3.0);
}

struct HDerivatives {
  Eigen::Matrix2cd dz, dzb, dw, dwb;
};

HDerivatives fd_derivatives(const FiberModel& model, Complex z, Complex w, Scalar step) {
  const Scalar hz = step * std::abs(z);
  const Scalar hw = step * fiber_length_scale(model, z);
  auto H = [&](Complex zz, Complex ww) { return metric_at(model, zz, ww).matrix.matrix(); };
  const Eigen::Matrix2cd dx = (H(z + hz, w) - H(z - hz, w)) / (2.0 * hz);
  const Eigen::Matrix2cd dy = (H(z + kI * hz, w) - H(z - kI * hz, w)) / (2.0 * hz);
  const Eigen::Matrix2cd du = (H(z, w + hw) - H(z, w - hw)) / (2.0 * hw);
  const Eigen::Matrix2cd dv = (H(z, w + kI * hw) - H(z, w - kI * hw)) / (2.0 * hw);
  HDerivatives d;
  d.dz = 0.5 * (dx - kI * dy);
  d.dzb = 0.5 * (dx + kI * dy);
  d.dw = 0.5 * (du - kI * dv);
  d.dwb = 0.5 * (du + kI * dv);
  return d;
}

Eigen::Array4d closedness_defects(const HDerivatives& d) {
  Eigen::Array4d r;
  // d_w h_{z kb} - d_z h_{w kb}
  r(0) = std::abs(d.dw(0, 0) - d.dz(1, 0));
  r(1) = std::abs(d.dw(0, 1) - d.dz(1, 1));
  // d_wb h_{j zb} - d_zb h_{j wb}
  r(2) = std::abs(d.dwb(0, 0) - d.dzb(0, 1));
  r(3) = std::abs(d.dwb(1, 0) - d.dzb(1, 1));
  return r;
}

}  // namespace

Scalar kahler_residual(const FiberModel& model, Complex z, Complex w, FdOptions fd) {
  if (fd.richardson) {
    const HDerivatives c = fd_derivatives(model, z, w, fd.step);
    const HDerivatives f = fd_derivatives(model, z, w, 0.5 * fd.step);
    HDerivatives r;
    r.dz = (4.0 * f.dz - c.dz) / 3.0;
    r.dzb = (4.0 * f.dzb - c.dzb) / 3.0;
    r.dw = (4.0 * f.dw - c.dw) / 3.0;
    r.dwb = (4.0 * f.dwb - c.dwb) / 3.0;
    return closedness_defects(r).maxCoeff();
  }
  return closedness_defects(fd_derivatives(model, z, w, fd.step)).maxCoeff();
}

Scalar kahler_scale(const FiberModel& model, Complex z, Complex w) {
  const HermitianMatrix2 h = metric_at(model, z, w).matrix;
  return std::max({std::abs(h.h_zz), std::abs(h.h_ww), std::abs(h.h_zw)}) / std::abs(z);
}

Scalar ricci_residual(const FiberModel& model, Complex z, FdOptions fd) {
  const Scalar det0 = metric_at(model, z, 0.0).matrix.det();
  auto f = [&](Complex p) { return std::log(metric_at(model, p, 0.0).matrix.det() / det0); };
  auto laplacian = [&](Scalar step) {
    const Scalar h = step * std::abs(z);
    return (f(z + h) + f(z - h) + f(z + kI * h) + f(z - kI * h)) / (h * h);
  };
  return std::abs(0.25 * richardson(laplacian, fd));
}

Scalar ricci_scale(Complex z) { return 1.0 / std::norm(z); }

}  // namespace sflab
