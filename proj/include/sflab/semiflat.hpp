#pragma once

#include <Eigen/Dense>

#include "sflab/core.hpp"
#include "sflab/fiber_models.hpp"

namespace sflab {

// Coefficients of omega = i h_zz dz^dzb + i h_zw dz^dwb + i conj(h_zw) dw^dzb + i h_ww dw^dwb.
struct HermitianMatrix2 {
  Scalar h_zz = 0;
  Scalar h_ww = 0;
  Complex h_zw{0.0, 0.0};

  Eigen::Matrix2cd matrix() const;
  Scalar det() const { return h_zz * h_ww - std::norm(h_zw); }
  bool positive() const { return h_zz > 0 && h_ww > 0 && det() > 0; }
};

struct MetricPoint {
  Complex z, w;
  HermitianMatrix2 matrix;
  Scalar A_coeff = 0;  // |g|^2 pairing / eps
  Scalar B_coeff = 0;  // eps / (2 pairing)
  Complex gamma;
  Complex g;  // volume density
};

Complex gamma(const FiberModel& model, Complex z, Complex w);
Complex gamma(const PeriodSample& s, Complex w);

MetricPoint metric_at(const FiberModel& model, Complex z, Complex w);

// Metric with closed-form antiholomorphic derivatives d/dzb H and d/dwb H.
struct MetricJet {
  MetricPoint point;
  Eigen::Matrix2cd H;
  Eigen::Matrix2cd dzbar_H;
  Eigen::Matrix2cd dwbar_H;
};
MetricJet metric_jet(const FiberModel& model, Complex z, Complex w);

struct FiberFlatData {
  Complex v1, v2;  // reduced basis, scaled by sqrt(2 B)
  Scalar area = 0;
  Scalar shortest_vector = 0;
  Scalar diameter_proxy = 0;
};
FiberFlatData fiber_flat_data(const FiberModel& model, Complex z);
FiberFlatData fiber_flat_data_log(const FiberModel& model, Complex log_z);
// Lagrange-Gauss reduction of the lattice Z v1 + Z v2.
void gauss_reduce(Complex& v1, Complex& v2);

// Natural length scale of the fiber at z (shortest unscaled period).
Scalar fiber_length_scale(const FiberModel& model, Complex z);

// Finite-difference options. Steps are relative: step*|z| in the base and
// step*fiber_length_scale in the fiber.
struct FdOptions {
  Scalar step = 1e-4;
  bool richardson = false;
};

Scalar kahler_residual(const FiberModel& model, Complex z, Complex w, FdOptions fd = {});
Scalar kahler_scale(const FiberModel& model, Complex z, Complex w);

// |d^2/dz dzb log det h| at (z, 0) by the five-point Laplacian.
Scalar ricci_residual(const FiberModel& model, Complex z, FdOptions fd = {});
Scalar ricci_scale(Complex z);

}  // namespace sflab
