#include <gtest/gtest.h>

#include <random>

#include "sflab/fiber_models.hpp"

using namespace sflab;

namespace {

FiberModel finite(FiberKind k, std::optional<int> m = std::nullopt, PoleFlag p = PoleFlag::MinusD) {
  FiberModel model = FiberModel::standard(KodairaType::of(k), p);
  model.m = m;
  return model;
}

std::vector<FiberModel> sample_models() {
  std::vector<FiberModel> out;
  for (int b : {1, 2, 3}) {
    out.push_back(FiberModel::standard(KodairaType::I(b)));
    out.push_back(FiberModel::standard(KodairaType::Istar(b)));
  }
  FiberModel i0 = FiberModel::standard(KodairaType::I(0));
  i0.tau = TauFunction::linear(kI, Complex{0.25, 0.1});
  out.push_back(i0);
  FiberModel i0s = FiberModel::standard(KodairaType::Istar(0));
  i0s.tau = TauFunction::exponential(Complex{0.0, 1.5});
  out.push_back(i0s);
  out.push_back(finite(FiberKind::II));
  out.push_back(finite(FiberKind::II, 4));
  out.push_back(finite(FiberKind::III, 1));
  out.push_back(finite(FiberKind::IV, 2));
  out.push_back(finite(FiberKind::IIstar, 5));
  out.push_back(finite(FiberKind::IIIstar, 3));
  out.push_back(finite(FiberKind::IVstar, 1));
  return out;
}

}  // namespace

TEST(Generators, IsotrivialIIRatioIsZeta3) {
  const FiberModel m = finite(FiberKind::II);
  const Complex zeta3 = std::polar(1.0, 2.0 * kPi / 3.0);
  for (double x : {0.1, 0.5, 0.9}) {
    const PeriodSample s = generators(m, x);
    EXPECT_NEAR(std::abs(s.tau2 / s.tau1 - zeta3), 0.0, 1e-15);
  }
}

TEST(Generators, PairingOracles) {
  EXPECT_NEAR(generators(finite(FiberKind::II), 0.5).pairing, std::sqrt(3.0) / 2.0 * std::pow(0.5, 5.0 / 3.0), 1e-15);
  EXPECT_NEAR(generators(FiberModel::standard(KodairaType::I(1)), 0.1).pairing, std::log(10.0) / (2.0 * kPi), 1e-15);
  EXPECT_NEAR(generators(FiberModel::standard(KodairaType::Istar(2)), 0.1).pairing, 2.0 * std::log(10.0) / kPi,
              1e-14);
  // II with m = 1: pairing = (sqrt3/2) |z|^{5/3} (1 - |z|^{2/3})
  const double r = 0.3;
  EXPECT_NEAR(generators(finite(FiberKind::II, 1), r).pairing,
              std::sqrt(3.0) / 2.0 * std::pow(r, 5.0 / 3.0) * (1.0 - std::pow(r, 2.0 / 3.0)), 1e-15);
}

TEST(Generators, DomainErrors) {
  const FiberModel m = FiberModel::standard(KodairaType::I(1));
  EXPECT_THROW(generators(m, 0.0), InputError);
  EXPECT_THROW(generators(m, 1.0), InputError);
  EXPECT_THROW(generators(m, Complex{-0.5, 0.0}), InputError);
  FiberModel bad = FiberModel::standard(KodairaType::I(0));
  bad.tau.reset();
  EXPECT_THROW(bad.validate(), InputError);
}

TEST(Generators, DerivativesMatchFiniteDifferences) {
  for (const FiberModel& m : sample_models()) {
    const Complex z{0.21, 0.13};
    const PeriodSample s = generators(m, z);
    const double h = 1e-6;
    const PeriodSample p = generators(m, z + h), q = generators(m, z - h);
    const Complex fd1 = (p.tau1 - q.tau1) / (2 * h), fd2 = (p.tau2 - q.tau2) / (2 * h);
    EXPECT_NEAR(std::abs(fd1 - s.dtau1), 0.0, 1e-7 * (1 + std::abs(s.dtau1))) << m.describe();
    EXPECT_NEAR(std::abs(fd2 - s.dtau2), 0.0, 1e-7 * (1 + std::abs(s.dtau2))) << m.describe();
    const Complex fdd1 = (p.dtau1 - q.dtau1) / (2 * h), fdd2 = (p.dtau2 - q.dtau2) / (2 * h);
    EXPECT_NEAR(std::abs(fdd1 - s.d2tau1), 0.0, 1e-6 * (1 + std::abs(s.d2tau1))) << m.describe();
    EXPECT_NEAR(std::abs(fdd2 - s.d2tau2), 0.0, 1e-6 * (1 + std::abs(s.d2tau2))) << m.describe();
  }
}

TEST(Generators, LogEvaluationAgrees) {
  for (const FiberModel& m : sample_models()) {
    const Complex z{0.05, -0.2};
    const PeriodSample a = generators(m, z), b = generators_log(m, std::log(z));
    EXPECT_NEAR(std::abs(a.tau1 - b.tau1), 0.0, 1e-14 * (1 + std::abs(a.tau1))) << m.describe();
    EXPECT_NEAR(std::abs(a.tau2 - b.tau2), 0.0, 1e-14 * (1 + std::abs(a.tau2))) << m.describe();
    EXPECT_NEAR(a.pairing, b.pairing, 1e-13 * a.pairing) << m.describe();
  }
}

TEST(GeneratorsProperty, PairingPositiveOnRandomPoints) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 1);
  for (const FiberModel& m : sample_models()) {
    for (int i = 0; i < 200; ++i) {
      const double span = m.uses_u_coordinate() ? 0.49 * kPi : 0.99 * kPi;
      const Complex z = std::polar(0.01 + 0.9 * U(rng), span * (2 * U(rng) - 1));
      ASSERT_GT(generators(m, z).pairing, 0.0) << m.describe() << " z=" << z;
    }
  }
}

TEST(MultiplicityN, Examples) {
  EXPECT_EQ(multiplicity_N(FiberModel::standard(KodairaType::I(0))), 0);
  EXPECT_EQ(multiplicity_N(FiberModel::standard(KodairaType::I(4))), 0);
  EXPECT_EQ(multiplicity_N(finite(FiberKind::II)), 1);
  EXPECT_EQ(multiplicity_N(FiberModel::standard(KodairaType::Istar(2))), 1);
}

TEST(ConeAngles, Examples) {
  const ConeAngles ii = cone_angles(KodairaType::of(FiberKind::II));
  EXPECT_DOUBLE_EQ(ii.incomplete, 5.0 / 6.0);
  EXPECT_DOUBLE_EQ(ii.complete, 1.0 / 6.0);
  const ConeAngles i0s = cone_angles(KodairaType::Istar(0));
  EXPECT_DOUBLE_EQ(i0s.incomplete, 0.5);
  EXPECT_DOUBLE_EQ(i0s.complete, 0.5);
  const ConeAngles ib = cone_angles(KodairaType::I(7));
  EXPECT_DOUBLE_EQ(ib.incomplete, 1.0);
  EXPECT_DOUBLE_EQ(ib.complete, 0.0);
}

TEST(ConeAnglesProperty, DualTypesSumToOne) {
  for (FiberKind k : {FiberKind::II, FiberKind::III, FiberKind::IV, FiberKind::IIstar, FiberKind::IIIstar,
                      FiberKind::IVstar}) {
    const ConeAngles c = cone_angles(KodairaType::of(k));
    EXPECT_NEAR(c.incomplete + c.complete, 1.0, 1e-15);
  }
}

TEST(VolumeDensity, Examples) {
  EXPECT_NEAR(std::abs(volume_density_g(FiberModel::standard(KodairaType::I(1)), 0.2) - 5.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(volume_density_g(finite(FiberKind::II, std::nullopt, PoleFlag::Zero), 0.5) - 2.0), 0.0, 1e-14);
  FiberModel i0 = FiberModel::standard(KodairaType::I(0));
  i0.k = {Complex{2.0, 0.0}};
  EXPECT_NEAR(std::abs(volume_density_g(i0, 0.1) - 20.0), 0.0, 1e-13);
  EXPECT_THROW(volume_density_g(i0, 0.0), InputError);
}

TEST(MonodromyConsistency, Examples) {
  EXPECT_LT(monodromy_consistency(FiberModel::standard(KodairaType::I(1)), 0.3), 1e-12);
  EXPECT_LT(monodromy_consistency(finite(FiberKind::II), 0.25), 1e-12);
  EXPECT_EQ(monodromy_consistency(FiberModel::standard(KodairaType::I(0)), 0.3), 0.0);
}

TEST(MonodromyConsistencyProperty, AllFamilies) {
  for (const FiberModel& m : sample_models())
    for (Complex z : {Complex{0.3, 0.1}, Complex{0.05, -0.02}, Complex{0.6, 0.5}})
      EXPECT_LT(monodromy_consistency(m, z), 1e-12) << m.describe();
}

TEST(TableRegistry, RowsAndGoldenEntries) {
  const auto& rows = table_registry();
  ASSERT_EQ(rows.size(), 14u);
  EXPECT_EQ(rows[2].type, KodairaType::of(FiberKind::II));
  EXPECT_EQ(rows[2].order, Order{6});
  EXPECT_EQ(rows[2].theta_complete_text, "1/6");
  EXPECT_EQ(rows[3].type, KodairaType::of(FiberKind::IVstar));
  EXPECT_EQ(rows[3].sign, -1);
  EXPECT_EQ(rows[12].type, KodairaType::I(1));
  EXPECT_FALSE(rows[12].order.has_value());
  for (const TableRow& r : rows) {
    const ConeAngles c = cone_angles(r.type);
    EXPECT_EQ(c.incomplete, r.theta_incomplete) << r.type.name();
    EXPECT_EQ(c.complete, r.theta_complete) << r.type.name();
    EXPECT_EQ(r.N, multiplicity_N(FiberModel::standard(r.type)));
  }
}

TEST(FiberModel, Validation) {
  FiberModel m = finite(FiberKind::II, 2);
  EXPECT_THROW(m.validate(), InputError);
  m.m = 4;
  EXPECT_NO_THROW(m.validate());
  m.epsilon = -1;
  EXPECT_THROW(m.validate(), InputError);
  FiberModel ib = FiberModel::standard(KodairaType::I(2));
  ib.m = 1;
  EXPECT_THROW(ib.validate(), InputError);
  ib.m.reset();
  ib.k = {Complex{0.0, 0.0}};
  EXPECT_THROW(ib.validate(), InputError);
}

TEST(PoleOrder, NativeCoordinates) {
  EXPECT_EQ(pole_order(FiberModel::standard(KodairaType::I(1))), 1);
  EXPECT_EQ(pole_order(FiberModel::standard(KodairaType::I(1), PoleFlag::Zero)), 0);
  EXPECT_EQ(pole_order(finite(FiberKind::II)), 2);
  EXPECT_EQ(pole_order(FiberModel::standard(KodairaType::Istar(1))), 2);
  EXPECT_EQ(pole_order(FiberModel::standard(KodairaType::Istar(1), PoleFlag::Zero)), 0);
}
