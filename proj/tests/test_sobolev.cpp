#include <gtest/gtest.h>

#include "sflab/sobolev.hpp"

using namespace sflab;

TEST(Sobolev, HatProfileClosedForms) {
  // beta = 4, alpha = 2: |S^3| = 2 pi^2
  const SobolevReport r4 = sobolev_probe(4, 2.0, {RadialProfile::hat()}, {1.0});
  ASSERT_EQ(r4.rows.size(), 1u);
  const double s3 = 2.0 * kPi * kPi;
  EXPECT_NEAR(r4.rows[0].lhs, std::sqrt(s3 / 280.0), 1e-8);
  EXPECT_NEAR(r4.rows[0].rhs, s3 / 4.0, 1e-8);
  // beta = 3, alpha = 3: |S^2| = 4 pi
  const SobolevReport r3 = sobolev_probe(3, 3.0, {RadialProfile::hat()}, {1.0});
  EXPECT_NEAR(r3.rows[0].lhs, std::cbrt(4.0 * kPi / 252.0), 1e-8);
  EXPECT_NEAR(r3.rows[0].rhs, 4.0 * kPi / 3.0, 1e-8);
}

TEST(Sobolev, UnweightedCasesAreDilationInvariant) {
  for (auto [beta, alpha] : {std::pair{4, 2.0}, std::pair{3, 3.0}}) {
    const SobolevReport r = sobolev_probe(beta, alpha, default_profiles());
    EXPECT_EQ(r.weight_exponent, 0.0);
    EXPECT_LE(r.dilation_factor, 1.0 + 1e-6);
    EXPECT_TRUE(std::isfinite(r.sup_ratio));
  }
}

TEST(Sobolev, ZeroProfileIsExcluded) {
  const SobolevReport r = sobolev_probe(4, 2.0, {RadialProfile::zero(), RadialProfile::quartic()});
  ASSERT_EQ(r.excluded.size(), 1u);
  EXPECT_EQ(r.excluded[0], RadialProfile::zero().name);
  for (const SobolevRow& row : r.rows)
    if (row.profile == r.excluded[0]) EXPECT_TRUE(row.excluded);
}

TEST(Sobolev, WeightedCaseSeesDilation) {
  const SobolevReport r = sobolev_probe(4, 1.5, {RadialProfile::cosine()});
  EXPECT_EQ(r.weight_exponent, -1.0);
  EXPECT_GT(r.dilation_factor, 1.5);
}

TEST(Sobolev, ParameterValidation) {
  EXPECT_THROW(sobolev_probe(5, 2.0, default_profiles()), InputError);
  EXPECT_THROW(sobolev_probe(4, 2.5, default_profiles()), InputError);
  EXPECT_THROW(sobolev_probe(4, 0.5, default_profiles()), InputError);
  EXPECT_THROW(sobolev_probe(4, 2.0, {}), InputError);
}
