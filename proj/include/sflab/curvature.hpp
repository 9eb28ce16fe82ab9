#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "sflab/core.hpp"
#include "sflab/fiber_models.hpp"

namespace sflab {

enum class DerivativeMode {
  ClosedForm,              // closed-form dbar H, one finite-difference layer
  NestedFiniteDifference,  // both layers by finite differences
};

struct CurvatureOptions {
  DerivativeMode mode = DerivativeMode::ClosedForm;
  Scalar step = 1e-3;        // outer relative step
  Scalar inner_step = 1e-4;  // nested mode only
};

// Theta_{j kb} = d_j (H^-1 d_kb H), j, k in {z, w}.
struct CurvatureForm {
  std::array<Eigen::Matrix2cd, 4> component;
  const Eigen::Matrix2cd& operator()(int j, int k) const { return component[2 * j + k]; }
  Eigen::Matrix2cd& operator()(int j, int k) { return component[2 * j + k]; }
  Scalar max_abs() const;
};

CurvatureForm chern_curvature(const FiberModel& model, Complex z, Complex w, CurvatureOptions opt = {});

// |Theta|^2 at (z, 0).
Scalar theta_norm_sq(const FiberModel& model, Complex z, CurvatureOptions opt = {});
Scalar theta_norm_sq(const FiberModel& model, Complex z, Complex w, CurvatureOptions opt = {});

// (h^{z zb} / |z|^2)^2 at (z, 0): the size of curvature built from the
// metric's own variation scale.
Scalar curvature_scale(const FiberModel& model, Complex z);

// Leading asymptotic |Theta|^2 where a closed form is known, else 0.
Scalar asymptotic_curvature_target(const FiberModel& model, Complex z);

// |-d^2/dz dzb log Im tau - |tau'|^2 / (4 Im tau^2)|; step is absolute.
Scalar wp_residual(const FiberModel& model, Complex z, Scalar step);

struct CurvatureSample {
  Complex z;
  Scalar theta_norm_sq = 0;
  Scalar target = 0;
  Scalar ratio = 0;  // NaN when target is 0
};

std::vector<CurvatureSample> curvature_decay_scan(const FiberModel& model, const std::vector<Scalar>& radii,
                                                  CurvatureOptions opt = {});

}  // namespace sflab
