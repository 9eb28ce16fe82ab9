#include <gtest/gtest.h>

#include <random>

#include "sflab/ma_lab.hpp"

using namespace sflab;

namespace {

TorusGrid random_grid(int m, int n, double amp, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-amp, amp);
  TorusGrid g(m, n);
  for (double& v : g.values()) v = U(rng);
  return g;
}

double max_diff(const TorusGrid& a, const TorusGrid& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace

TEST(TorusGrid, ShapeAndWrap) {
  const TorusGrid g(2, 4);
  EXPECT_EQ(g.size(), 256u);
  EXPECT_EQ(g.dims(), 4);
  EXPECT_EQ(g.shift(0, 0, -1), 3 * g.stride(0));
  EXPECT_EQ(g.shift(g.stride(3) * 3, 3, 1), 0u);
  EXPECT_THROW(TorusGrid(3, 8), InputError);
  EXPECT_THROW(TorusGrid(1, 6), InputError);
  EXPECT_THROW(TorusGrid(1, 2), InputError);
}

TEST(TorusGrid, TranslationRoundTrip) {
  const TorusGrid g = random_grid(1, 8, 1.0, 1);
  EXPECT_EQ(max_diff(g.translated(1, 3).translated(1, -3), g), 0.0);
  EXPECT_NEAR(g.translated(0, 1).sum(), g.sum(), 1e-14);
}

TEST(MaOperator, ZeroPotential) {
  for (int m : {1, 2}) {
    const TorusGrid f = ma_operator(TorusGrid(m, 4));
    for (double v : f.values()) EXPECT_DOUBLE_EQ(v, std::pow(0.5, m));
  }
}

TEST(MaOperatorProperty, MassIdentityOnRandomPotentials) {
  for (int m : {1, 2})
    for (unsigned seed = 0; seed < 5; ++seed) {
      const TorusGrid u = random_grid(m, 8, 1e-3, seed);
      EXPECT_LT(mass_identity_defect(u), 1e-15) << "m=" << m;
    }
}

TEST(MaOperatorProperty, TranslationEquivariant) {
  const TorusGrid u = random_grid(2, 4, 1e-3, 9);
  for (int axis = 0; axis < 4; ++axis)
    EXPECT_LT(max_diff(ma_operator(u.translated(axis, 1)), ma_operator(u).translated(axis, 1)), 1e-15);
}

TEST(Normalize, ExponentialMeanIsOne) {
  const Normalized nf = normalize_compatibility(random_grid(1, 16, 0.7, 3));
  double s = 0;
  for (double v : nf.f.values()) s += std::exp(v) - 1.0;
  EXPECT_LT(std::abs(s) / nf.f.size(), 1e-14);
}

TEST(SolveCma, ZeroDataGivesZeroSolution) {
  TorusProblem p{TorusGrid(2, 4)};
  const Solution s = solve_cma(p);
  EXPECT_LT(s.u.max_abs(), 1e-14);
  EXPECT_LE(s.residual_inf, p.newton_tol);
}

TEST(SolveCma, OneDimensionalMatchesLinearSolve) {
  const Normalized nf = normalize_compatibility(sinusoidal_data(1, 64, 0.4));
  const Solution s = solve_cma(TorusProblem{nf.f});
  EXPECT_LT(max_diff(s.u, solve_linearized(nf.f)), 1e-10);
  EXPECT_GT(s.positivity_margin, 0.0);
}

TEST(SolveCma, RejectsIncompatibleData) {
  TorusProblem p{TorusGrid(1, 8, 0.3)};
  EXPECT_THROW(solve_cma(p), InputError);
  p.epsilon_perturb = 0.5;
  EXPECT_THROW(solve_cma(p), InputError);
  p.epsilon_perturb = 0.0;
  EXPECT_THROW(solve_perturbed(p), InputError);
}

TEST(SolvePerturbed, MaximumPrinciple) {
  const TorusGrid f = sinusoidal_data(2, 8, 0.5);
  for (double eps : {1.0, 0.5, 0.1}) {
    TorusProblem p{f};
    p.epsilon_perturb = eps;
    const Solution s = solve_perturbed(p);
    EXPECT_LE(s.u.max_abs(), f.max_abs() / eps + 1e-8) << eps;
    EXPECT_LE(s.residual_inf, p.newton_tol);
  }
}

TEST(SolvePerturbed, IterationCapIsReported) {
  TorusProblem p{sinusoidal_data(1, 16, 2.0)};
  p.epsilon_perturb = 0.01;
  p.max_iters = 1;
  EXPECT_THROW(solve_perturbed(p), NumericalFailure);
}

TEST(Manufactured, SecondOrderConvergence) {
  const ConvergenceStudy st = manufactured_convergence(1, {16, 32, 64});
  EXPECT_NEAR(st.order, 2.0, 0.2);
  EXPECT_GT(st.error.front(), st.error.back());
}

TEST(Manufactured, MarginIsRealized) {
  const Manufactured mp = manufactured_problem(2, 8);
  EXPECT_GE(mp.margin, 0.1);
  EXPECT_LT(std::abs(mp.u_star.mean()), 1e-14);
  EXPECT_THROW(manufactured_problem(2, 8, 0.05), InputError);
}
