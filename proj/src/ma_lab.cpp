#include "sflab/ma_lab.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>

#include <fftw3.h>
#include <Eigen/Core>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCore>

#include "sflab/fit.hpp"

namespace sflab::detail {

using Offsets = std::array<std::ptrdiff_t, 4>;

// Visits nodes in storage order with the wrapped +1 / -1 offsets per axis.
template <class F>
void for_each_node(const TorusGrid& g, F&& f) {
  const int d = g.dims(), n = g.n();
  std::array<int, 4> i{};
  Offsets plus{}, minus{};
  const std::size_t N = g.size();
  for (std::size_t idx = 0; idx < N; ++idx) {
    for (int a = 0; a < d; ++a) {
      const auto s = static_cast<std::ptrdiff_t>(g.stride(a));
      plus[a] = i[a] + 1 < n ? s : -(n - 1) * s;
      minus[a] = i[a] > 0 ? -s : (n - 1) * s;
    }
    f(idx, plus, minus);
    for (int a = d - 1; a >= 0; --a) {
      if (++i[a] < n) break;
      i[a] = 0;
    }
  }
}

// Finite differences of a field at one node.
struct Local {
  const Scalar* v;
  std::size_t i;
  const Offsets& p;
  const Offsets& mn;
  Scalar ih2;

  Scalar at(std::ptrdiff_t off) const { return v[static_cast<std::ptrdiff_t>(i) + off]; }
  Scalar second(int a) const { return (at(p[a]) - 2.0 * v[i] + at(mn[a])) * ih2; }
  // D_a^s D_b^t with s, t in {0: forward, 1: backward}.
  Scalar corner(int a, int b, int s, int t) const {
    const std::ptrdiff_t oa = s == 0 ? p[a] : mn[a], ob = t == 0 ? p[b] : mn[b];
    const Scalar sign = (s == t) ? 1.0 : -1.0;
    return sign * (at(oa + ob) - at(oa) - at(ob) + v[i]) * ih2;
  }
  Scalar central(int a, int b) const {
    return (at(p[a] + p[b]) - at(p[a] + mn[b]) - at(mn[a] + p[b]) + at(mn[a] + mn[b])) * 0.25 * ih2;
  }
};

constexpr std::array<std::array<int, 2>, 4> kPairs{{{0, 2}, {0, 3}, {1, 2}, {1, 3}}};

Scalar base_det(int m) { return m == 1 ? 0.5 : 0.25; }

// Second differences of u needed by the m = 2 operator and its linearization.
struct Hessian2 {
  std::vector<Scalar> s1, s2;                  // u_x1x1 + u_y1y1, u_x2x2 + u_y2y2
  std::array<std::vector<Scalar>, 16> corner;  // pair * 4 + s * 2 + t
  std::array<std::vector<Scalar>, 4> central;  // by pair
};

Hessian2 hessian2(const TorusGrid& u) {
  const std::size_t N = u.size();
  Hessian2 H;
  H.s1.resize(N);
  H.s2.resize(N);
  for (auto& c : H.corner) c.resize(N);
  for (auto& c : H.central) c.resize(N);
  const Scalar ih2 = 1.0 / (u.h() * u.h());
  for_each_node(u, [&](std::size_t i, const Offsets& p, const Offsets& mn) {
    const Local L{u.values().data(), i, p, mn, ih2};
    H.s1[i] = L.second(0) + L.second(1);
    H.s2[i] = L.second(2) + L.second(3);
    for (int q = 0; q < 4; ++q) {
      const int a = kPairs[q][0], b = kPairs[q][1];
      for (int s = 0; s < 2; ++s)
        for (int t = 0; t < 2; ++t) H.corner[4 * q + 2 * s + t][i] = L.corner(a, b, s, t);
      H.central[q][i] = L.central(a, b);
    }
  });
  return H;
}

// ------------------------------------------------------------ FFT Poisson

class PoissonSolver {
 public:
  PoissonSolver(int m, int n) : m_(m), n_(n) {
    const int d = 2 * m;
    std::array<int, 4> dims{};
    std::size_t N = 1;
    for (int a = 0; a < d; ++a) {
      dims[a] = n;
      N *= static_cast<std::size_t>(n);
    }
    N_ = N;
    Nc_ = N / n * (n / 2 + 1);
    real_ = static_cast<double*>(fftw_malloc(sizeof(double) * N_));
    spec_ = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * Nc_));
    fwd_ = fftw_plan_dft_r2c(d, dims.data(), real_, spec_, FFTW_ESTIMATE);
    bwd_ = fftw_plan_dft_c2r(d, dims.data(), spec_, real_, FFTW_ESTIMATE);
    if (!fwd_ || !bwd_) throw NumericalFailure("FFT planning failed");
    // Symbol of the compact Laplacian on the half spectrum.
    symbol_.resize(Nc_);
    const Scalar h = 1.0 / n, ih2 = 1.0 / (h * h);
    std::vector<Scalar> axis(n);
    for (int k = 0; k < n; ++k) {
      const Scalar s = std::sin(kPi * k / n);
      axis[k] = -4.0 * ih2 * s * s;
    }
    const int last = n / 2 + 1;
    std::array<int, 4> k{};
    for (std::size_t j = 0; j < Nc_; ++j) {
      Scalar sum = 0;
      for (int a = 0; a < d; ++a) sum += axis[k[a]];
      symbol_[j] = sum;
      for (int a = d - 1; a >= 0; --a) {
        const int lim = a == d - 1 ? last : n;
        if (++k[a] < lim) break;
        k[a] = 0;
      }
    }
  }
  ~PoissonSolver() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
    fftw_free(real_);
    fftw_free(spec_);
  }
  PoissonSolver(const PoissonSolver&) = delete;
  PoissonSolver& operator=(const PoissonSolver&) = delete;

  // out = (sigma * Laplacian - c)^-1 in; with c = 0 the mean mode is dropped.
  void apply(const Scalar* in, Scalar* out, Scalar sigma, Scalar c) const {
    std::copy(in, in + N_, real_);
    fftw_execute(fwd_);
    for (std::size_t j = 0; j < Nc_; ++j) {
      const Scalar denom = sigma * symbol_[j] - c;
      const Scalar scale = denom == 0.0 ? 0.0 : 1.0 / (denom * static_cast<Scalar>(N_));
      spec_[j][0] *= scale;
      spec_[j][1] *= scale;
    }
    fftw_execute(bwd_);
    std::copy(real_, real_ + N_, out);
  }

  int m() const { return m_; }
  int n() const { return n_; }

 private:
  int m_, n_;
  std::size_t N_ = 0, Nc_ = 0;
  double* real_ = nullptr;
  fftw_complex* spec_ = nullptr;
  fftw_plan fwd_ = nullptr, bwd_ = nullptr;
  std::vector<Scalar> symbol_;
};

// Newton Jacobian of F(u) - (1/2)^m exp(f + eps u), applied matrix-free.
class JacobianOp;

}  // namespace sflab::detail

namespace Eigen::internal {
template <>
struct traits<sflab::detail::JacobianOp> : public traits<Eigen::SparseMatrix<double>> {};
}  // namespace Eigen::internal

namespace sflab::detail {

class JacobianOp : public Eigen::EigenBase<JacobianOp> {
 public:
  using Scalar = double;
  using RealScalar = double;
  using StorageIndex = int;
  enum { ColsAtCompileTime = Eigen::Dynamic, MaxColsAtCompileTime = Eigen::Dynamic, IsRowMajor = false };

  JacobianOp(const TorusGrid& u, const std::vector<double>& reaction, bool project)
      : shape_(u.m(), u.n()), reaction_(reaction), project_(project) {
    if (u.m() == 2) hess_ = std::make_unique<Hessian2>(hessian2(u));
  }

  Eigen::Index rows() const { return static_cast<Eigen::Index>(shape_.size()); }
  Eigen::Index cols() const { return rows(); }

  template <typename Rhs>
  Eigen::Product<JacobianOp, Rhs, Eigen::AliasFreeProduct> operator*(const Eigen::MatrixBase<Rhs>& x) const {
    return Eigen::Product<JacobianOp, Rhs, Eigen::AliasFreeProduct>(*this, x.derived());
  }

  void apply(const double* v, double* out) const {
    const Scalar ih2 = 1.0 / (shape_.h() * shape_.h());
    if (shape_.m() == 1) {
      for_each_node(shape_, [&](std::size_t i, const Offsets& p, const Offsets& mn) {
        const Local L{v, i, p, mn, ih2};
        out[i] = 0.25 * (L.second(0) + L.second(1)) - reaction_[i] * v[i];
      });
    } else {
      const Hessian2& H = *hess_;
      for_each_node(shape_, [&](std::size_t i, const Offsets& p, const Offsets& mn) {
        const Local L{v, i, p, mn, ih2};
        const Scalar t1 = L.second(0) + L.second(1), t2 = L.second(2) + L.second(3);
        Scalar corner = 0;
        std::array<Scalar, 4> c{};
        for (int q = 0; q < 4; ++q) {
          const int a = kPairs[q][0], b = kPairs[q][1];
          for (int s = 0; s < 2; ++s)
            for (int t = 0; t < 2; ++t) corner += H.corner[4 * q + 2 * s + t][i] * L.corner(a, b, s, t);
          c[q] = L.central(a, b);
        }
        // pairs: 0 = (x1,x2), 1 = (x1,y2), 2 = (y1,x2), 3 = (y1,y2)
        const Scalar cross = H.central[0][i] * c[3] + H.central[3][i] * c[0] - H.central[1][i] * c[2] -
                             H.central[2][i] * c[1];
        const Scalar q2 = H.s1[i] * t2 + H.s2[i] * t1 - 0.5 * corner - 2.0 * cross;
        out[i] = 0.125 * (t1 + t2) + q2 / 16.0 - reaction_[i] * v[i];
      });
    }
    if (project_) {
      Eigen::Map<Eigen::VectorXd> o(out, rows());
      o.array() -= o.mean();
    }
  }

 private:
  TorusGrid shape_;
  const std::vector<double>& reaction_;
  bool project_;
  std::unique_ptr<Hessian2> hess_;
};

// Constant-coefficient inverse of the Laplacian part of the Jacobian.
class PoissonPreconditioner {
 public:
  PoissonPreconditioner() = default;
  void setup(const PoissonSolver* solver, Scalar sigma, Scalar c, bool project) {
    solver_ = solver;
    sigma_ = sigma;
    c_ = c;
    project_ = project;
  }
  template <typename M>
  PoissonPreconditioner& analyzePattern(const M&) { return *this; }
  template <typename M>
  PoissonPreconditioner& factorize(const M&) { return *this; }
  template <typename M>
  PoissonPreconditioner& compute(const M&) { return *this; }
  Eigen::ComputationInfo info() { return Eigen::Success; }

  template <typename Rhs>
  Eigen::VectorXd solve(const Eigen::MatrixBase<Rhs>& b) const {
    const Eigen::VectorXd in = b;
    Eigen::VectorXd out(in.size());
    solver_->apply(in.data(), out.data(), sigma_, c_);
    if (project_) out.array() -= out.mean();
    return out;
  }

 private:
  const PoissonSolver* solver_ = nullptr;
  Scalar sigma_ = 1, c_ = 0;
  bool project_ = false;
};

}  // namespace sflab::detail

namespace Eigen::internal {

template <typename Rhs>
struct generic_product_impl<sflab::detail::JacobianOp, Rhs, SparseShape, DenseShape, GemvProduct>
    : generic_product_impl_base<sflab::detail::JacobianOp, Rhs,
                                generic_product_impl<sflab::detail::JacobianOp, Rhs>> {
  using Scalar = typename Product<sflab::detail::JacobianOp, Rhs>::Scalar;

  template <typename Dest>
  static void scaleAndAddTo(Dest& dst, const sflab::detail::JacobianOp& lhs, const Rhs& rhs, const Scalar& alpha) {
    const Eigen::VectorXd x = rhs;
    Eigen::VectorXd y(x.size());
    lhs.apply(x.data(), y.data());
    dst.noalias() += alpha * y;
  }
};

}  // namespace Eigen::internal

namespace sflab {

using detail::base_det;
using detail::for_each_node;
using detail::hessian2;
using detail::Hessian2;
using detail::Local;
using detail::Offsets;
using detail::PoissonSolver;

// ------------------------------------------------------------ operators

TorusGrid laplacian(const TorusGrid& u) {
  TorusGrid out(u.m(), u.n());
  const Scalar ih2 = 1.0 / (u.h() * u.h());
  for_each_node(u, [&](std::size_t i, const Offsets& p, const Offsets& mn) {
    const Local L{u.values().data(), i, p, mn, ih2};
    Scalar s = 0;
    for (int a = 0; a < u.dims(); ++a) s += L.second(a);
    out[i] = s;
  });
  return out;
}

TorusGrid ma_operator(const TorusGrid& u) {
  TorusGrid out(u.m(), u.n());
  if (u.m() == 1) {
    const TorusGrid lap = laplacian(u);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = 0.5 + 0.25 * lap[i];
    return out;
  }
  const Hessian2 H = hessian2(u);
  for (std::size_t i = 0; i < u.size(); ++i) {
    Scalar sq = 0;
    for (int q = 0; q < 4; ++q)
      for (int st = 0; st < 4; ++st) sq += H.corner[4 * q + st][i] * H.corner[4 * q + st][i];
    const Scalar cross = H.central[0][i] * H.central[3][i] - H.central[1][i] * H.central[2][i];
    const Scalar q2 = H.s1[i] * H.s2[i] - 0.25 * sq - 2.0 * cross;
    out[i] = 0.25 + 0.125 * (H.s1[i] + H.s2[i]) + q2 / 16.0;
  }
  return out;
}

Scalar mass_identity_defect(const TorusGrid& u) {
  TorusGrid F = ma_operator(u);
  const Scalar b = base_det(u.m());
  for (std::size_t i = 0; i < F.size(); ++i) F[i] -= b;
  return std::abs(F.sum()) / static_cast<Scalar>(F.size());
}

Scalar positivity_margin(const TorusGrid& u) {
  Scalar margin = std::numeric_limits<Scalar>::infinity();
  const Scalar ih2 = 1.0 / (u.h() * u.h());
  for_each_node(u, [&](std::size_t i, const Offsets& p, const Offsets& mn) {
    const Local L{u.values().data(), i, p, mn, ih2};
    if (u.m() == 1) {
      margin = std::min(margin, 0.5 + 0.25 * (L.second(0) + L.second(1)));
      return;
    }
    const Scalar A = 0.5 + 0.25 * (L.second(0) + L.second(1));
    const Scalar B = 0.5 + 0.25 * (L.second(2) + L.second(3));
    const Scalar re = 0.25 * (L.central(0, 2) + L.central(1, 3));
    const Scalar im = 0.25 * (L.central(0, 3) - L.central(1, 2));
    const Scalar half = 0.5 * (A - B);
    margin = std::min(margin, 0.5 * (A + B) - std::sqrt(half * half + re * re + im * im));
  });
  return margin;
}

Scalar trace_min(const TorusGrid& u) {
  const TorusGrid lap = laplacian(u);
  Scalar t = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < lap.size(); ++i) t = std::min(t, u.m() + 0.5 * lap[i]);
  return t;
}

Normalized normalize_compatibility(const TorusGrid& f) {
  Scalar fmax = -std::numeric_limits<Scalar>::infinity();
  for (Scalar v : f.values()) {
    if (!std::isfinite(v)) throw InputError("f must be finite at every node");
    fmax = std::max(fmax, v);
  }
  // Log-mean-exp start, then Newton on log mean(e^(f-c)) = 0 to clean up rounding.
  TorusGrid e(f.m(), f.n());
  for (std::size_t i = 0; i < f.size(); ++i) e[i] = std::exp(f[i] - fmax);
  Scalar c = fmax + std::log(e.mean());
  for (int it = 0; it < 3; ++it) {
    for (std::size_t i = 0; i < f.size(); ++i) e[i] = std::exp(f[i] - c);
    const Scalar g = e.mean();
    c += std::log(g);
    if (std::abs(g - 1.0) < 1e-16) break;
  }
  Normalized out{f, c};
  for (Scalar& v : out.f.values()) v -= c;
  return out;
}

namespace {

Scalar compatibility_defect(const TorusGrid& f) {
  Scalar sum = 0, mass = 0;
  TorusGrid e(f.m(), f.n());
  for (std::size_t i = 0; i < f.size(); ++i) e[i] = std::exp(f[i]) - 1.0;
  sum = e.sum();
  for (Scalar v : f.values()) mass += std::exp(v);
  return std::abs(sum) / mass;
}

}  // namespace

TorusGrid solve_linearized(const TorusGrid& f) {
  if (compatibility_defect(f) > 1e-12) throw InputError("right-hand side is incompatible: normalize f first");
  TorusGrid rhs(f.m(), f.n());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = 2.0 * std::expm1(f[i]);
  rhs.subtract_mean();
  PoissonSolver poisson(f.m(), f.n());
  TorusGrid u(f.m(), f.n());
  poisson.apply(rhs.values().data(), u.values().data(), 1.0, 0.0);
  u.subtract_mean();
  return u;
}

namespace {

struct NewtonResult {
  TorusGrid u;
  std::vector<Scalar> history;
  int steps = 0;
  int krylov = 0;
};

TorusGrid residual(const TorusGrid& u, const TorusGrid& f, Scalar eps) {
  TorusGrid R = ma_operator(u);
  const Scalar b = base_det(u.m());
  for (std::size_t i = 0; i < R.size(); ++i) R[i] -= b * std::exp(f[i] + eps * u[i]);
  return R;
}

NewtonResult newton(const TorusGrid& f, Scalar eps, TorusGrid u, bool project, Scalar tol, int max_iters,
                    const PoissonSolver& poisson) {
  if (project) u.subtract_mean();
  NewtonResult res;
  TorusGrid R = residual(u, f, eps);
  Scalar rinf = R.max_abs();
  res.history.push_back(rinf);
  const Scalar b = base_det(u.m());
  const Scalar sigma = u.m() == 1 ? 0.25 : 0.125;
  while (rinf >= tol) {
    if (res.steps >= max_iters) throw NumericalFailure("Newton iteration exceeded max_iters");
    std::vector<double> reaction(u.size());
    Scalar mean_reaction = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      reaction[i] = eps * b * std::exp(f[i] + eps * u[i]);
      mean_reaction += reaction[i];
    }
    mean_reaction /= static_cast<Scalar>(u.size());
    detail::JacobianOp J(u, reaction, project);
    Eigen::BiCGSTAB<detail::JacobianOp, detail::PoissonPreconditioner> krylov;
    krylov.preconditioner().setup(&poisson, sigma, mean_reaction, project);
    krylov.setTolerance(1e-10);
    krylov.setMaxIterations(1000);
    krylov.compute(J);
    Eigen::Map<const Eigen::VectorXd> r(R.values().data(), static_cast<Eigen::Index>(R.size()));
    Eigen::VectorXd rhs = -r;
    if (project) rhs.array() -= rhs.mean();
    const Eigen::VectorXd delta = krylov.solve(rhs);
    res.krylov += static_cast<int>(krylov.iterations());
    if (!delta.allFinite() || krylov.error() > 1e-6) throw NumericalFailure("Krylov solve for the Newton step failed");

    Scalar step = 1.0;
    while (true) {
      TorusGrid trial(u);
      for (std::size_t i = 0; i < u.size(); ++i) trial[i] += step * delta[static_cast<Eigen::Index>(i)];
      if (project) trial.subtract_mean();
      if (positivity_margin(trial) > 0.0) {
        TorusGrid Rt = residual(trial, f, eps);
        const Scalar rt = Rt.max_abs();
        if (rt <= rinf) {
          u = std::move(trial);
          R = std::move(Rt);
          rinf = rt;
          break;
        }
      }
      step *= 0.5;
      if (step < 1.0 / (1 << 30)) throw NumericalFailure("damping underflow in Newton line search");
    }
    ++res.steps;
    res.history.push_back(rinf);
  }
  res.u = std::move(u);
  return res;
}

void check_problem(const TorusProblem& p) {
  if (p.f.size() == 0) throw InputError("empty problem grid");
  if (!(p.newton_tol > 0.0)) throw InputError("newton_tol must be positive");
  if (p.max_iters <= 0) throw InputError("max_iters must be positive");
  if (!(p.epsilon_perturb >= 0.0)) throw InputError("epsilon must be non-negative");
  for (Scalar v : p.f.values())
    if (!std::isfinite(v)) throw InputError("f must be finite at every node");
}

TorusGrid start(const TorusProblem& p, const std::optional<TorusGrid>& initial) {
  if (!initial) return TorusGrid(p.m(), p.n());
  if (!initial->same_shape(p.f)) throw InputError("initial guess has the wrong shape");
  return *initial;
}

void finish(Solution& s, const TorusGrid& f, Scalar eps) {
  s.residual_inf = residual(s.u, f, eps).max_abs();
  s.positivity_margin = positivity_margin(s.u);
  s.trace_min = trace_min(s.u);
}

void absorb(Solution& s, const NewtonResult& r) {
  s.iterations += r.steps;
  s.krylov_iterations += r.krylov;
  s.residual_history.insert(s.residual_history.end(), r.history.begin(), r.history.end());
}

}  // namespace

Solution solve_perturbed(const TorusProblem& problem, const std::optional<TorusGrid>& initial) {
  check_problem(problem);
  if (!(problem.epsilon_perturb > 0.0)) throw InputError("solve_perturbed needs epsilon > 0");
  PoissonSolver poisson(problem.m(), problem.n());
  const NewtonResult r = newton(problem.f, problem.epsilon_perturb, start(problem, initial), false,
                                problem.newton_tol, problem.max_iters, poisson);
  Solution s;
  s.u = r.u;
  absorb(s, r);
  s.epsilon_stages.push_back(problem.epsilon_perturb);
  finish(s, problem.f, problem.epsilon_perturb);
  return s;
}

Solution solve_cma(const TorusProblem& problem, const std::optional<TorusGrid>& initial) {
  check_problem(problem);
  if (problem.epsilon_perturb != 0.0) throw InputError("solve_cma solves the unperturbed equation; use epsilon 0");
  if (compatibility_defect(problem.f) > 1e-12) throw InputError("f is not normalized: sum(e^f - 1) != 0");
  PoissonSolver poisson(problem.m(), problem.n());
  Solution s;
  TorusGrid u = start(problem, initial);
  auto try_final = [&](const TorusGrid& u0) -> bool {
    try {
      const NewtonResult r = newton(problem.f, 0.0, u0, true, problem.newton_tol, problem.max_iters, poisson);
      s.u = r.u;
      absorb(s, r);
      s.epsilon_stages.push_back(0.0);
      return true;
    } catch (const NumericalFailure&) {
      return false;
    }
  };
  bool done = try_final(u);
  for (int k = 0; !done && k <= 20; ++k) {
    const Scalar eps = std::ldexp(1.0, -k);
    const NewtonResult r = newton(problem.f, eps, u, false, problem.newton_tol, problem.max_iters, poisson);
    absorb(s, r);
    s.epsilon_stages.push_back(eps);
    u = r.u;
    done = try_final(u);
  }
  if (!done) throw NumericalFailure("continuation reached epsilon = 0 without convergence");
  s.u.subtract_mean();
  finish(s, problem.f, 0.0);
  return s;
}

// ------------------------------------------------------------ manufactured data

namespace {

struct Mode {
  std::array<int, 4> k;
  Scalar c;
  Scalar phase;
};

std::vector<Mode> modes(int m) {
  if (m == 1) return {{{1, 1, 0, 0}, 1.0, 0.0}, {{2, 0, 0, 0}, 0.5, 0.3}, {{0, 1, 0, 0}, 0.7, 1.1}};
  return {{{1, 0, 0, 1}, 1.0, 0.0},
          {{0, 1, -1, 0}, 0.7, 0.4},
          {{1, 1, 1, 0}, 0.5, 1.3},
          {{0, 0, 0, 2}, 0.3, 2.0},
          {{0, 0, 1, 0}, 0.6, 0.9}};
}

Scalar mode_value(const std::vector<Mode>& ms, const std::array<Scalar, 4>& x) {
  Scalar v = 0;
  for (const Mode& md : ms) {
    Scalar arg = md.phase;
    for (int a = 0; a < 4; ++a) arg += 2.0 * kPi * md.k[a] * x[a];
    v += md.c * std::cos(arg);
  }
  return v;
}

// Complex Hessian (unit amplitude) of the mode sum: returns (H11, H22, Re H12, Im H12).
std::array<Scalar, 4> mode_hessian(const std::vector<Mode>& ms, const std::array<Scalar, 4>& x) {
  Scalar r[4][4] = {};
  for (const Mode& md : ms) {
    Scalar arg = md.phase;
    for (int a = 0; a < 4; ++a) arg += 2.0 * kPi * md.k[a] * x[a];
    const Scalar w = -md.c * 4.0 * kPi * kPi * std::cos(arg);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) r[a][b] += w * md.k[a] * md.k[b];
  }
  return {0.25 * (r[0][0] + r[1][1]), 0.25 * (r[2][2] + r[3][3]), 0.25 * (r[0][2] + r[1][3]),
          0.25 * (r[0][3] - r[1][2])};
}

Scalar min_eig(int m, const std::array<Scalar, 4>& H, Scalar amp) {
  const Scalar A = 0.5 + amp * H[0];
  if (m == 1) return A;
  const Scalar B = 0.5 + amp * H[1];
  const Scalar half = 0.5 * (A - B);
  return 0.5 * (A + B) - std::sqrt(half * half + amp * amp * (H[2] * H[2] + H[3] * H[3]));
}

Scalar det_c(int m, const std::array<Scalar, 4>& H, Scalar amp) {
  const Scalar A = 0.5 + amp * H[0];
  if (m == 1) return A;
  const Scalar B = 0.5 + amp * H[1];
  return A * B - amp * amp * (H[2] * H[2] + H[3] * H[3]);
}

}  // namespace

Manufactured manufactured_problem(int m, int n, Scalar target_margin) {
  if (!(target_margin >= 0.1) || !(target_margin < 0.5)) throw InputError("target margin must lie in [0.1, 0.5)");
  const auto ms = modes(m);
  // Amplitude fixed by a reference sampling so that it does not depend on n.
  const TorusGrid ref(m, m == 1 ? 64 : 16);
  Scalar lo = 0.0, hi = 1.0;
  auto worst = [&](Scalar amp) {
    Scalar w = std::numeric_limits<Scalar>::infinity();
    for (std::size_t i = 0; i < ref.size(); ++i) w = std::min(w, min_eig(m, mode_hessian(ms, ref.coords(i)), amp));
    return w;
  };
  while (worst(hi) > target_margin) hi *= 2.0;
  for (int it = 0; it < 50; ++it) {
    const Scalar mid = 0.5 * (lo + hi);
    (worst(mid) > target_margin ? lo : hi) = mid;
  }
  Manufactured out;
  out.amplitude = lo;
  out.u_star = TorusGrid(m, n);
  TorusGrid f(m, n);
  out.margin = std::numeric_limits<Scalar>::infinity();
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.coords(i);
    const auto H = mode_hessian(ms, x);
    out.u_star[i] = out.amplitude * mode_value(ms, x);
    out.margin = std::min(out.margin, min_eig(m, H, out.amplitude));
    f[i] = std::log(det_c(m, H, out.amplitude) / base_det(m));
  }
  if (out.margin < 0.1) throw NumericalFailure("manufactured solution left the positivity margin");
  out.u_star.subtract_mean();
  out.f = normalize_compatibility(f).f;
  return out;
}

ConvergenceStudy manufactured_convergence(int m, const std::vector<int>& sizes, Scalar newton_tol) {
  if (sizes.size() < 2) throw InputError("convergence study needs at least two grid sizes");
  ConvergenceStudy st;
  std::vector<Scalar> logn, loge;
  for (int n : sizes) {
    const Manufactured mf = manufactured_problem(m, n);
    TorusProblem p;
    p.f = mf.f;
    p.newton_tol = newton_tol;
    Solution s = solve_cma(p);
    Scalar err = 0;
    for (std::size_t i = 0; i < s.u.size(); ++i) err = std::max(err, std::abs(s.u[i] - mf.u_star[i]));
    st.n.push_back(n);
    st.error.push_back(err);
    logn.push_back(std::log(static_cast<Scalar>(n)));
    loge.push_back(std::log(err));
    st.solutions.push_back(std::move(s));
  }
  st.order = -fit_line(logn, loge).slope;
  return st;
}

TorusGrid sinusoidal_data(int m, int n, Scalar amplitude) {
  TorusGrid f(m, n);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto x = f.coords(i);
    Scalar v = std::sin(2.0 * kPi * x[0]) + 0.5 * std::cos(2.0 * kPi * (x[0] + x[1]));
    if (m == 2) v += std::sin(2.0 * kPi * x[2]) * std::cos(2.0 * kPi * x[3]);
    f[i] = amplitude * v;
  }
  return f;
}

}  // namespace sflab
