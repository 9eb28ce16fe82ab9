#include <gtest/gtest.h>

#include "sflab/curvature.hpp"
#include "sflab/fit.hpp"

using namespace sflab;

namespace {

FiberModel finite(FiberKind k, std::optional<int> m, PoleFlag p = PoleFlag::MinusD) {
  FiberModel model = FiberModel::standard(KodairaType::of(k), p);
  model.m = m;
  return model;
}

struct Oracle {
  FiberModel model;
  Complex z;
  double value;
};

std::vector<Oracle> oracles() {
  std::vector<Oracle> o;
  o.push_back({FiberModel::standard(KodairaType::I(1)), 1e-6, 8.5162688118151307e-6});
  FiberModel i2 = FiberModel::standard(KodairaType::I(2));
  i2.epsilon = 0.5;
  i2.k = {Complex{2.0, 0.0}};
  o.push_back({i2, 1e-3, 2.1290672029537827e-6});
  o.push_back({FiberModel::standard(KodairaType::I(3)), {0.01, 0.02}, 0.0021837227774343256});
  o.push_back({FiberModel::standard(KodairaType::Istar(1)), 1e-6, 1.6700038504385036e-28});
  o.push_back({FiberModel::standard(KodairaType::Istar(2)), 0.01, 4.9179397992580931e-11});
  o.push_back({finite(FiberKind::II, 1), {0.3, 0.1}, 1.8625485811530978});
  FiberModel iii = finite(FiberKind::III, 1, PoleFlag::Zero);
  iii.epsilon = 2.0;
  o.push_back({iii, 0.25, 40.032921810699588});
  FiberModel lin = FiberModel::standard(KodairaType::I(0));
  lin.tau = TauFunction::linear(kI, 0.5);
  o.push_back({lin, 0.2, 0.00515});
  FiberModel ex = FiberModel::standard(KodairaType::I(0));
  ex.tau = TauFunction::exponential(kI);
  ex.k = {Complex{1.0, 0.0}, Complex{1.0 / 3.0, 0.0}};
  ex.epsilon = 0.7;
  o.push_back({ex, {0.15, -0.05}, 0.0029901719369148069});
  return o;
}

}  // namespace

TEST(ThetaNormSq, MatchesOraclesClosedForm) {
  for (const Oracle& o : oracles())
    EXPECT_NEAR(theta_norm_sq(o.model, o.z), o.value, 1e-6 * o.value) << o.model.describe();
}

TEST(ThetaNormSq, MatchesOraclesNested) {
  CurvatureOptions opt;
  opt.mode = DerivativeMode::NestedFiniteDifference;
  for (const Oracle& o : oracles()) {
    if (std::abs(o.z) < 1e-5) continue;  // nested differences lose too many digits this deep
    EXPECT_NEAR(theta_norm_sq(o.model, o.z, opt), o.value, 1e-4 * o.value) << o.model.describe();
  }
}

TEST(ThetaNormSq, IndependentOfFiberPoint) {
  const FiberModel m = finite(FiberKind::IV, 2);
  const double a = theta_norm_sq(m, {0.2, 0.1});
  for (Complex w : {Complex{0.3, 0.0}, Complex{-0.4, 0.7}})
    EXPECT_NEAR(theta_norm_sq(m, {0.2, 0.1}, w), a, 1e-6 * a);
}

TEST(ThetaNormSq, IsotrivialModelsAreFlat) {
  for (FiberKind k : {FiberKind::II, FiberKind::III, FiberKind::IV}) {
    const FiberModel m = finite(k, std::nullopt);
    const Complex z{0.2, 0.1};
    EXPECT_LE(theta_norm_sq(m, z, {0.1, 0.2}), 1e-10 * curvature_scale(m, z)) << m.describe();
  }
  FiberModel c = FiberModel::standard(KodairaType::I(0));
  c.tau = TauFunction::linear({0.3, 1.2}, 0.0);
  EXPECT_LE(theta_norm_sq(c, 0.3), 1e-10 * curvature_scale(c, 0.3));
}

TEST(CurvatureDecay, IbPowerLaw) {
  const FiberModel m = FiberModel::standard(KodairaType::I(2));
  const auto rows = curvature_decay_scan(m, log_space(1e-12, 1e-6, 8));
  std::vector<double> L, th;
  for (const auto& r : rows) {
    L.push_back(-std::log(std::abs(r.z)));
    th.push_back(r.theta_norm_sq);
  }
  const GrowthFit f = fit_power_law(L, th);
  EXPECT_NEAR(f.exponent, -6.0, 0.1);
  EXPECT_NEAR(rows.front().ratio, 1.0, 0.15);
}

TEST(CurvatureDecay, NoTargetGivesNaNRatio) {
  const auto rows = curvature_decay_scan(finite(FiberKind::II, 1), {0.1});
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(std::isnan(rows[0].ratio));
  EXPECT_EQ(asymptotic_curvature_target(FiberModel::standard(KodairaType::I(1), PoleFlag::Zero), 0.1), 0.0);
}

TEST(WpResidual, ConstantTauIsExactlyZero) {
  FiberModel c = FiberModel::standard(KodairaType::I(0));
  c.tau = TauFunction::linear({0.3, 1.2}, 0.0);
  EXPECT_EQ(wp_residual(c, 0.2, 1e-3), 0.0);
}

TEST(WpResidual, SecondOrderInStep) {
  FiberModel m = FiberModel::standard(KodairaType::I(0));
  m.tau = TauFunction::linear({0.0, 0.5}, 0.4);
  const Complex z{0.1, -0.6};
  const double a = wp_residual(m, z, 1e-2), b = wp_residual(m, z, 5e-3);
  EXPECT_LT(wp_residual(m, z, 1e-3), 1e-6);
  EXPECT_NEAR(std::log2(a / b), 2.0, 0.2);
  EXPECT_THROW(wp_residual(FiberModel::standard(KodairaType::I(1)), z, 1e-3), InputError);
}
