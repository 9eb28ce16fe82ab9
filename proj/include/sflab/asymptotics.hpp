#pragma once

#include <vector>

#include "sflab/core.hpp"
#include "sflab/fiber_models.hpp"
#include "sflab/fit.hpp"

namespace sflab {

// Base metric lambda |dz|^2 of the semi-flat metric (w = 0 block of the
// horizontal part), lambda = 2 |g|^2 P / eps. Radial models are evaluated
// in ell = -log|z| so that deep points need not be representable.
class BaseMetric {
 public:
  explicit BaseMetric(FiberModel model);

  const FiberModel& model() const { return model_; }
  bool radial() const { return radial_; }

  Scalar conformal_factor(Complex z) const;
  // log(lambda t^2) at t = exp(-ell); radial models only.
  Scalar log_lambda_t2(Scalar ell) const;
  // d/d ell of log(lambda t^2).
  Scalar log_lambda_t2_slope(Scalar ell) const;
  // 2 pi, or pi on the half-disk chart of I_b*.
  Scalar angular_extent() const;
  // Largest ell the evaluation supports.
  Scalar max_ell() const;

 private:
  FiberModel model_;
  bool radial_ = false;
  Scalar log_prefactor_ = 0;  // log(2 alpha |k0|^2 / eps)
  int q_ = 0;
};

inline constexpr Scalar kBaseRadius = 0.5;

// Integral of sqrt(lambda) dt over [r1, r0], 0 < r1 <= r0 < 1.
Scalar radial_distance(const BaseMetric& base, Scalar r0, Scalar r1);
// Same between ell0 = -log r0 and ell1 = -log r1.
Scalar radial_distance_log(const BaseMetric& base, Scalar ell0, Scalar ell1);

// ell at which the distance from the base circle equals s; capped at max_ell.
Scalar ell_at_distance(const BaseMetric& base, Scalar s);

// eps times the lambda-area of the distance-s neighbourhood of the base
// circle inside the punctured disk.
Scalar ball_volume(const BaseMetric& base, Scalar s);

// Local cone angle at |z| = r: (extent / 2 pi) |d log sqrt(lambda t^2) / d ell|.
// Returns 0 when the estimate decays toward a half-line.
Scalar cone_angle_numeric(const BaseMetric& base, Scalar r);

struct InjectivityScan {
  GrowthFit shortest;   // against r (I_b) or log r (I_b*)
  GrowthFit diameter;   // against r
  bool against_log_r = false;
  std::vector<Scalar> ell;
};
// radii are total-space distances from the base circle.
InjectivityScan injectivity_proxy_scan(const FiberModel& model, const std::vector<Scalar>& radii);

struct AlhScan {
  Scalar mu = 0;
  Scalar rate = 0;
  Scalar target_rate = 0;  // sqrt(eps) / mu
  Scalar circle_length = 0;
  Scalar circle_target = 0;  // 2 pi mu / sqrt(eps)
  GrowthFit fit;             // log deviation against t
  std::vector<Scalar> t;
  std::vector<Scalar> deviation;
  bool strictly_decreasing = false;
};

Scalar alh_mu(const FiberModel& model);
// Sup over the fiber cell and the circle of the relative deviation from the
// flat cylinder metric at cylinder coordinate t.
Scalar alh_deviation(const FiberModel& model, Scalar t);
// Default t samples: 16 points on [5 mu, 40 mu].
AlhScan alh_decay(const FiberModel& model, std::vector<Scalar> t_samples = {});

}  // namespace sflab
