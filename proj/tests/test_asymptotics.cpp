#include <gtest/gtest.h>

#include "sflab/asymptotics.hpp"

using namespace sflab;

namespace {

FiberModel finite(FiberKind k, std::optional<int> m, PoleFlag p) {
  FiberModel model = FiberModel::standard(KodairaType::of(k), p);
  model.m = m;
  return model;
}

}  // namespace

TEST(Fit, PowerLawAndLine) {
  const std::vector<double> x = log_space(1.0, 100.0, 9);
  std::vector<double> y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 1.5));
  const GrowthFit f = fit_power_law(x, y);
  EXPECT_NEAR(f.exponent, 1.5, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
  EXPECT_TRUE(f.ok());
  EXPECT_NEAR(x.front(), 1.0, 1e-15);
  EXPECT_NEAR(x.back(), 100.0, 1e-12);
  const LineFit l = fit_line({0, 1, 2}, {1, 3, 5});
  EXPECT_NEAR(l.slope, 2.0, 1e-14);
  EXPECT_NEAR(l.intercept, 1.0, 1e-14);
}

TEST(RadialDistance, I1ClosedForm) {
  const BaseMetric base(FiberModel::standard(KodairaType::I(1)));
  const double l0 = std::log(2.0), l1 = 12.0 * std::log(10.0);
  const double exact = 2.0 / 3.0 * std::sqrt(1.0 / kPi) * (std::pow(l1, 1.5) - std::pow(l0, 1.5));
  EXPECT_NEAR(exact, 54.4126931000952, 1e-10);
  EXPECT_NEAR(radial_distance(base, 0.5, 1e-12), exact, 1e-9 * exact);
  EXPECT_NEAR(radial_distance_log(base, l0, l1), exact, 1e-9 * exact);
  EXPECT_THROW(radial_distance(base, 0.5, 0.6), InputError);
}

TEST(RadialDistance, InverseIsConsistent) {
  const BaseMetric base(FiberModel::standard(KodairaType::Istar(2)));
  for (double s : {1.0, 50.0, 1e4}) {
    const double ell = ell_at_distance(base, s);
    EXPECT_NEAR(radial_distance_log(base, -std::log(kBaseRadius), ell), s, 1e-8 * s);
  }
}

TEST(ConeAngle, FiniteTypesDeep) {
  for (PoleFlag p : {PoleFlag::Zero, PoleFlag::MinusD}) {
    for (FiberKind k : {FiberKind::II, FiberKind::IIIstar}) {
      const FiberModel m = finite(k, std::nullopt, p);
      const ConeAngles ca = cone_angles(m);
      const double target = p == PoleFlag::Zero ? ca.incomplete : ca.complete;
      EXPECT_NEAR(cone_angle_numeric(BaseMetric(m), 1e-8), target, 1e-4) << m.describe();
    }
  }
}

TEST(ConeAngle, CompleteIbIsHalfLine) {
  EXPECT_EQ(cone_angle_numeric(BaseMetric(FiberModel::standard(KodairaType::I(1))), 1e-8), 0.0);
  EXPECT_THROW(cone_angle_numeric(BaseMetric(FiberModel::standard(KodairaType::I(1))), 1.5), InputError);
}

TEST(ConeAngle, IncompleteIbApproachesOneSlowly) {
  const BaseMetric base(FiberModel::standard(KodairaType::I(1), PoleFlag::Zero));
  const double a = cone_angle_numeric(base, 1e-4), b = cone_angle_numeric(base, 1e-8);
  EXPECT_LT(a, b);
  EXPECT_LT(b, 1.0);
  // logarithmic correction 1 - 1/(2 ell)
  EXPECT_NEAR(b, 1.0 - 1.0 / (2.0 * 8.0 * std::log(10.0)), 2e-3);
}

TEST(VolumeGrowth, I1AndI1Star) {
  const std::vector<double> s = log_space(1e2, 1e6, 8);
  for (auto [t, target] : {std::pair{KodairaType::I(1), 4.0 / 3.0}, std::pair{KodairaType::Istar(1), 2.0}}) {
    const BaseMetric base(FiberModel::standard(t));
    std::vector<double> v;
    for (double x : s) v.push_back(ball_volume(base, x));
    const GrowthFit f = fit_power_law(s, v);
    EXPECT_NEAR(f.exponent, target, 0.05) << t.name();
    EXPECT_TRUE(f.ok());
  }
}

TEST(Injectivity, I1Exponents) {
  const InjectivityScan scan = injectivity_proxy_scan(FiberModel::standard(KodairaType::I(1)), log_space(1e2, 1e6, 8));
  EXPECT_FALSE(scan.against_log_r);
  EXPECT_NEAR(scan.shortest.exponent, -1.0 / 3.0, 0.03);
  EXPECT_NEAR(scan.diameter.exponent, 1.0 / 3.0, 0.03);
  EXPECT_THROW(injectivity_proxy_scan(finite(FiberKind::II, 1, PoleFlag::MinusD), {1e2}), InputError);
}

TEST(Alh, ConstantTauHasZeroDeviation) {
  FiberModel m = FiberModel::standard(KodairaType::I(0));
  m.tau = TauFunction::linear({0.2, 1.1}, 0.0);
  EXPECT_EQ(alh_deviation(m, 3.0), 0.0);
  const AlhScan scan = alh_decay(m);
  EXPECT_TRUE(std::isnan(scan.rate));
}

TEST(Alh, RateAndCircle) {
  FiberModel m = FiberModel::standard(KodairaType::I(0));
  m.tau = TauFunction::linear(kI, 0.25);
  const AlhScan scan = alh_decay(m);
  EXPECT_NEAR(scan.rate, scan.target_rate, 0.05 * scan.target_rate);
  EXPECT_NEAR(scan.circle_length, scan.circle_target, 1e-12 * scan.circle_target);
  EXPECT_TRUE(scan.strictly_decreasing);
  EXPECT_NEAR(scan.mu, std::sqrt(2.0), 1e-15);
  EXPECT_THROW(alh_mu(FiberModel::standard(KodairaType::I(1))), InputError);
}
