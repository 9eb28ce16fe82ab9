#pragma once

#include <optional>
#include <vector>

#include "sflab/core.hpp"
#include "sflab/torus_grid.hpp"

namespace sflab {

// det(1/2 delta + u_{j kb}) = (1/2)^m exp(f + eps u) on the flat torus of
// complex dimension m, omega_0 = (i/2) sum dz_j ^ dzb_j.
struct TorusProblem {
  TorusGrid f;
  Scalar epsilon_perturb = 0.0;
  Scalar newton_tol = 1e-10;
  int max_iters = 50;

  int m() const { return f.m(); }
  int n() const { return f.n(); }
};

struct Solution {
  TorusGrid u;
  Scalar residual_inf = 0;
  int iterations = 0;  // accepted Newton steps over all stages
  int krylov_iterations = 0;
  Scalar positivity_margin = 0;  // min eigenvalue of 1/2 delta + Hess_c u
  Scalar trace_min = 0;          // min of m + 1/2 Laplacian u
  std::vector<Scalar> residual_history;
  std::vector<Scalar> epsilon_stages;
};

struct Normalized {
  TorusGrid f;
  Scalar shift = 0;  // f' = f - shift
};
Normalized normalize_compatibility(const TorusGrid& f);

// Discrete operator det(1/2 delta + Hess_c u). For m = 2 the squared mixed
// terms are averaged over the four one-sided corner stencils and the cross
// terms use central differences, so the grid sum of F(u) - (1/2)^m vanishes
// identically.
TorusGrid ma_operator(const TorusGrid& u);
// |sum(F(u) - (1/2)^m)| / N.
Scalar mass_identity_defect(const TorusGrid& u);
Scalar positivity_margin(const TorusGrid& u);
Scalar trace_min(const TorusGrid& u);
// Compact periodic Laplacian.
TorusGrid laplacian(const TorusGrid& u);

// Mean-zero solution of Laplacian u = 2 (e^f - 1) by diagonalising the
// periodic second-difference operator; exact for m = 1.
TorusGrid solve_linearized(const TorusGrid& f);

// Newton with halving line search for eps > 0.
Solution solve_perturbed(const TorusProblem& problem, const std::optional<TorusGrid>& initial = std::nullopt);
// eps = 0 by continuation over {1, 1/2, ..., 2^-20, 0}. Each stage first
// tries to finish at eps = 0 from the current iterate.
Solution solve_cma(const TorusProblem& problem, const std::optional<TorusGrid>& initial = std::nullopt);

// Smooth periodic u* built from a few Fourier modes, scaled so the smallest
// eigenvalue of 1/2 delta + Hess_c u* is about target_margin (never below
// 0.1), and f = log(det(1/2 delta + Hess_c u*) / (1/2)^m) from the exact
// Hessian, normalized.
struct Manufactured {
  TorusGrid u_star;  // mean zero
  TorusGrid f;
  Scalar amplitude = 0;
  Scalar margin = 0;  // realized on the grid
};
Manufactured manufactured_problem(int m, int n, Scalar target_margin = 0.3);

struct ConvergenceStudy {
  std::vector<int> n;
  std::vector<Scalar> error;  // max |u - u*|
  Scalar order = 0;           // least-squares slope of -log error against log n
  std::vector<Solution> solutions;
};
ConvergenceStudy manufactured_convergence(int m, const std::vector<int>& sizes, Scalar newton_tol = 1e-10);

// Small sinusoidal data used by the maximum-principle runs.
TorusGrid sinusoidal_data(int m, int n, Scalar amplitude);

}  // namespace sflab
