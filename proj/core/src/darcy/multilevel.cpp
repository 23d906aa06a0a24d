#include "wavinv/darcy/multilevel.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <string>

#include "wavinv/error.hpp"
#include "wavinv/wavelet/transform2d.hpp"

namespace wavinv::darcy {

namespace {

wavelet::LiftingConfig reflect_cfg(int half_width) {
  wavelet::LiftingConfig cfg;
  cfg.half_width = half_width;
  cfg.boundary = wavelet::Boundary::reflect;
  return cfg;
}

GridField2D as_field(Array2D<double> values) {
  GridField2D f;
  f.values = std::move(values);
  f.domain = Rect{0.0, 1.0, 0.0, 1.0};
  f.sampling = Sampling::nodal;
  return f;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

struct MultilevelSolver::Impl {
  SolverSettings settings;
  int J = 0, jmin = 0;
  std::vector<DarcyOperator> ops;                 // index level - jmin
  std::vector<wavelet::Transform2D> transfer;     // one level on the grid of level jmin+1+i
  std::unique_ptr<wavelet::Transform2D> adapt;    // J - jmin levels on the finest grid
  Eigen::PartialPivLU<Eigen::MatrixXd> coarse_lu;
  Array2D<double> f;
  std::vector<int> node_level;  // level of each finest node in the adaptive transform, -1 = scaling

  const DarcyOperator& op(int level) const { return ops[level - jmin]; }

  void coarse_solve(const Array2D<double>& rhs, Array2D<double>& v) const {
    const auto& A = op(jmin);
    const std::size_t n = A.n(), N = n * n;
    // project the right-hand side onto the compatible subspace
    double s = 0.0, w = 0.0;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        s += A.volume(r, c) * rhs(r, c);
        w += A.volume(r, c);
      }
    const double mean = s / w;
    Eigen::VectorXd b(N + 1);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) b(r * n + c) = A.volume(r, c) * (rhs(r, c) - mean);
    b(N) = 0.0;
    const Eigen::VectorXd x = coarse_lu.solve(b);
    for (std::size_t i = 0; i < N; ++i) v.storage()[i] = x(i);
  }

  // Per-level scratch arrays for cycle(); index level - jmin.
  struct Workspace {
    std::vector<Array2D<double>> r, rc, vc, e;
  };

  Workspace make_workspace() const {
    Workspace w;
    for (int l = jmin; l <= J; ++l) {
      const std::size_t n = op(l).n();
      w.r.emplace_back(n, n);
      w.e.emplace_back(n, n);
      w.rc.emplace_back(n, n);
      w.vc.emplace_back(n, n);
    }
    return w;
  }

  void cycle(int level, const Array2D<double>& rhs, Array2D<double>& v, Workspace& ws) const {
    if (level == jmin) {
      coarse_solve(rhs, v);
      return;
    }
    const auto& A = op(level);
    const int nu = settings.smoother_sweeps;
    const std::size_t k = std::size_t(level - jmin);
    A.smooth(rhs, v, nu);
    Array2D<double>& r = ws.r[k];
    A.residual(rhs, v, r);
    // wavelet projection: one forward lifting level, keep the even-even nodes
    const auto& T = transfer[k - 1];
    T.forward_level(r, 0);
    const std::size_t nc = op(level - 1).n();
    Array2D<double>& rc = ws.rc[k - 1];
    Array2D<double>& vc = ws.vc[k - 1];
    vc.fill(0.0);
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j) rc(i, j) = r(2 * i, 2 * j);
    cycle(level - 1, rc, vc, ws);
    // wavelet interpolation: inverse lifting level with zero details
    Array2D<double>& e = ws.e[k];
    e.fill(0.0);
    for (std::size_t i = 0; i < nc; ++i)
      for (std::size_t j = 0; j < nc; ++j) e(2 * i, 2 * j) = vc(i, j);
    T.inverse_level(e, 0);
    auto& vs = v.storage();
    const auto& es = e.storage();
    for (std::size_t i = 0; i < vs.size(); ++i) vs[i] += es[i];
    A.smooth(rhs, v, nu);
  }

  // Zeroes the wavelet coefficients of inactive nodes.
  void project(Array2D<double>& u, const std::vector<std::uint8_t>& active) const {
    adapt->forward(u);
    auto& us = u.storage();
    for (std::size_t i = 0; i < us.size(); ++i)
      if (node_level[i] >= 0 && !active[i]) us[i] = 0.0;
    adapt->inverse(u);
  }

  std::vector<std::uint8_t> base_grid() const {
    const int L = adapt->levels();
    std::vector<std::uint8_t> g(node_level.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = (node_level[i] < 0 || node_level[i] == L - 1) ? 1 : 0;
    return g;
  }

  std::vector<std::uint8_t> significant_grid(const Array2D<double>& u) const {
    const std::size_t n = u.rows();
    double norm = 0.0;
    for (double x : u.storage()) norm = std::max(norm, std::abs(x));
    auto g = base_grid();
    if (norm == 0.0) return g;
    Array2D<double> d = u;
    adapt->forward(d);
    const double cut = settings.refinement_threshold * norm;
    const auto mark = [&](long r, long c) {
      if (r < 0 || c < 0 || r >= long(n) || c >= long(n)) return;
      g[std::size_t(r) * n + std::size_t(c)] = 1;
    };
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        const int l = node_level[r * n + c];
        if (l < 0 || std::abs(d(r, c)) < cut) continue;
        const long s = 1L << l;
        // same-level neighbours on the spacing-s lattice
        for (long a = -1; a <= 1; ++a)
          for (long b = -1; b <= 1; ++b) {
            const long rr = long(r) + a * s, cc = long(c) + b * s;
            if (rr >= 0 && cc >= 0 && rr < long(n) && cc < long(n) && node_level[rr * n + cc] == l) mark(rr, cc);
          }
        // children on the next finer lattice
        if (l > 0) {
          const long hs = s / 2;
          for (long a = -1; a <= 1; ++a)
            for (long b = -1; b <= 1; ++b) mark(long(r) + a * hs, long(c) + b * hs);
        }
        mark(long(r), long(c));
      }
    return g;
  }
};

MultilevelSolver::MultilevelSolver(const DarcyProblem& problem, const SolverSettings& settings)
    : impl_(std::make_unique<Impl>()) {
  settings.validate();
  problem.validate();
  auto& I = *impl_;
  I.settings = settings;
  I.J = settings.finest_level_J;
  I.jmin = settings.coarsest_level;
  if (problem.level() < I.J)
    throw LevelError("permeability grid has level " + std::to_string(problem.level()) + " < finest_level_J " +
                     std::to_string(I.J));
  I.ops = discretize_hierarchy(problem, I.jmin, I.J, settings.half_width);
  const auto cfg = reflect_cfg(settings.half_width);
  for (int l = I.jmin + 1; l <= I.J; ++l) {
    const std::size_t n = (std::size_t{1} << l) + 1;
    I.transfer.emplace_back(n, n, 1, cfg);
  }
  const std::size_t n = I.op(I.J).n();
  I.adapt = std::make_unique<wavelet::Transform2D>(n, n, I.J - I.jmin, cfg);
  I.node_level.resize(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) I.node_level[r * n + c] = I.adapt->node_level(r, c);
  I.f = discretize_source(problem.sources, I.J);

  // bordered coarse system [[V L, V 1], [(V 1)^T, 0]]
  const auto& A = I.op(I.jmin);
  const std::size_t nc = A.n(), N = nc * nc;
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (std::size_t r = 0; r < nc; ++r)
    for (std::size_t c = 0; c < nc; ++c) {
      const std::size_t i = r * nc + c;
      const auto couple = [&](std::size_t j, double a) {
        M(i, i) += a;
        M(i, j) -= a;
      };
      if (c > 0) couple(i - 1, A.east(r, c - 1));
      if (c + 1 < nc) couple(i + 1, A.east(r, c));
      if (r > 0) couple(i - nc, A.north(r - 1, c));
      if (r + 1 < nc) couple(i + nc, A.north(r, c));
      M(i, N) = A.volume(r, c);
      M(N, i) = A.volume(r, c);
    }
  I.coarse_lu.compute(M);
}

MultilevelSolver::~MultilevelSolver() = default;
MultilevelSolver::MultilevelSolver(MultilevelSolver&&) noexcept = default;
MultilevelSolver& MultilevelSolver::operator=(MultilevelSolver&&) noexcept = default;

const DarcyOperator& MultilevelSolver::finest_operator() const { return impl_->op(impl_->J); }
const Array2D<double>& MultilevelSolver::source() const { return impl_->f; }

void MultilevelSolver::vcycle(const Array2D<double>& rhs, Array2D<double>& v) const {
  auto ws = impl_->make_workspace();
  impl_->cycle(impl_->J, rhs, v, ws);
}

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

GridField2D MultilevelSolver::solve(SolveReport* report) const { return solve(impl_->f, report); }

GridField2D MultilevelSolver::solve(const Array2D<double>& rhs, SolveReport* report) const {
  const auto& I = *impl_;
  const auto& A = I.op(I.J);
  const std::size_t n = A.n(), nn = n * n;
  const double tol = I.settings.residual_tolerance;
  SolveReport rep;
  if (rhs.rows() != n || rhs.cols() != n) throw ShapeError("right-hand side does not match the finest grid");
  Array2D<double> f = rhs;
  {
    const double fm = weighted_mean(f);
    for (auto& e : f.storage()) e -= fm;
  }

  Array2D<double> u(n, n, 0.0), r(n, n), v(n, n);
  auto ws = I.make_workspace();
  std::vector<std::uint8_t> active;
  bool full = false;
  double res = 0.0, lambda = 0.0;

  const auto spend_cycle = [&](double current) {
    if (rep.vcycles >= I.settings.max_vcycles)
      throw ConvergenceError("V-cycle budget of " + std::to_string(I.settings.max_vcycles) +
                                 " exhausted with residual " + std::to_string(current),
                             current);
    ++rep.vcycles;
  };
  // Residual of u projected onto the active space, shifted to be compatible.
  const auto active_residual = [&](const Array2D<double>& x, Array2D<double>& out) {
    A.residual(f, x, out);
    if (!full) I.project(out, active);
    lambda = weighted_mean(out);
    for (auto& e : out.storage()) e -= lambda;
    return max_abs(out.storage());
  };
  // Preconditioner: one V-cycle from zero, projected onto the active space.
  const auto precondition = [&](const Array2D<double>& rhs, Array2D<double>& out) {
    spend_cycle(res);
    out.fill(0.0);
    I.cycle(I.J, rhs, out, ws);
    if (!full) I.project(out, active);
  };
  // Operator of the projected system on the active space.
  const auto apply_projected = [&](const Array2D<double>& x, Array2D<double>& out) {
    A.apply(x, out);
    if (!full) I.project(out, active);
    const double m = weighted_mean(out);
    for (auto& e : out.storage()) e -= m;
  };

  // Plain V-cycle iteration. Returns false when a cycle fails to cut the
  // residual by 10% (high-contrast fields can stall the rediscretized coarse
  // levels), leaving the caller to continue with GMRES.
  const auto stationary = [&]() {
    double prev = INFINITY;
    for (;;) {
      res = active_residual(u, r);
      rep.residual_history.push_back(res);
      if (!std::isfinite(res)) throw ConvergenceError("residual is not finite", res);
      if (res <= tol) return true;
      if (res > 0.9 * prev) return false;
      prev = res;
      precondition(r, v);
      auto& us = u.storage();
      for (std::size_t i = 0; i < nn; ++i) us[i] += v.storage()[i];
    }
  };

  // Right-preconditioned restarted GMRES on the projected system.
  const auto gmres = [&]() {
    constexpr int kRestart = 30;
    std::vector<std::vector<double>> V, Z;
    std::vector<std::vector<double>> H(kRestart + 1, std::vector<double>(kRestart, 0.0));
    std::vector<double> cs(kRestart), sn(kRestart), g(kRestart + 1);
    Array2D<double> w(n, n), tmp(n, n);
    for (;;) {
      res = active_residual(u, r);
      rep.residual_history.push_back(res);
      if (!std::isfinite(res)) throw ConvergenceError("residual is not finite", res);
      if (res <= tol) return;
      const double beta = std::sqrt(dot(r.storage(), r.storage()));
      V.assign(1, r.storage());
      for (auto& e : V[0]) e /= beta;
      Z.clear();
      std::fill(g.begin(), g.end(), 0.0);
      g[0] = beta;
      int k = 0;
      for (; k < kRestart; ++k) {
        tmp.storage() = V[k];
        precondition(tmp, w);
        Z.push_back(w.storage());
        apply_projected(w, tmp);
        auto wk = tmp.storage();
        for (int i = 0; i <= k; ++i) {
          H[i][k] = dot(wk, V[i]);
          for (std::size_t e = 0; e < nn; ++e) wk[e] -= H[i][k] * V[i][e];
        }
        H[k + 1][k] = std::sqrt(dot(wk, wk));
        for (int i = 0; i < k; ++i) {
          const double t = cs[i] * H[i][k] + sn[i] * H[i + 1][k];
          H[i + 1][k] = -sn[i] * H[i][k] + cs[i] * H[i + 1][k];
          H[i][k] = t;
        }
        const double den = std::hypot(H[k][k], H[k + 1][k]);
        cs[k] = H[k][k] / den;
        sn[k] = H[k + 1][k] / den;
        const double hk1 = H[k + 1][k];
        H[k][k] = den;
        H[k + 1][k] = 0.0;
        g[k + 1] = -sn[k] * g[k];
        g[k] = cs[k] * g[k];
        if (std::abs(g[k + 1]) <= 0.5 * tol || hk1 == 0.0) {
          ++k;
          break;
        }
        for (auto& e : wk) e /= hk1;
        V.push_back(std::move(wk));
      }
      std::vector<double> y(k);
      for (int i = k - 1; i >= 0; --i) {
        double s = g[i];
        for (int j = i + 1; j < k; ++j) s -= H[i][j] * y[j];
        y[i] = s / H[i][i];
      }
      auto& us = u.storage();
      for (int i = 0; i < k; ++i)
        for (std::size_t e = 0; e < nn; ++e) us[e] += y[i] * Z[i][e];
    }
  };

  // Initial guess: a few V-cycles on the full grid, then the initial active
  // set from its significant coefficients.
  full = true;
  for (int c = 0; c < 3; ++c) {
    res = active_residual(u, r);
    rep.residual_history.push_back(res);
    if (res <= tol) break;
    precondition(r, v);
    for (std::size_t i = 0; i < nn; ++i) u.storage()[i] += v.storage()[i];
  }
  remove_mean(u);
  active = I.significant_grid(u);

  for (int m = 0;; ++m) {
    rep.outer_iterations = m + 1;
    full = std::all_of(active.begin(), active.end(), [](std::uint8_t a) { return a != 0; });
    if (!full) I.project(u, active);
    if (!full || !stationary()) gmres();
    remove_mean(u);
    // The set only grows within a solve, so the outer loop terminates.
    auto next = I.significant_grid(u);
    for (std::size_t i = 0; i < nn; ++i) next[i] |= active[i];
    if (next == active || m + 1 >= I.settings.max_outer_iterations) break;
    active = std::move(next);
  }

  rep.residual = res;
  rep.compatibility_shift = lambda;
  rep.active_nodes = static_cast<std::size_t>(std::count(active.begin(), active.end(), 1));
  if (report) *report = std::move(rep);
  return as_field(std::move(u));
}

GridField2D vcycle_solve(const DarcyProblem& problem, const SolverSettings& settings, SolveReport* report) {
  return MultilevelSolver(problem, settings).solve(report);
}

GridField2D direct_solve_oracle(const DarcyProblem& problem, int level) {
  return direct_solve_oracle(discretize_operator(problem, level), discretize_source(problem.sources, level));
}

GridField2D direct_solve_oracle(const DarcyOperator& A, const Array2D<double>& rhs) {
  const std::size_t n = A.n(), N = n * n;
  if (rhs.rows() != n || rhs.cols() != n) throw ShapeError("right-hand side does not match the operator grid");
  Array2D<double> f = rhs;
  {
    const double fm = weighted_mean(f);
    for (auto& e : f.storage()) e -= fm;
  }
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(6 * N);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      const std::size_t i = r * n + c;
      double diag = 0.0;
      const auto couple = [&](std::size_t j, double a) {
        diag += a;
        trip.emplace_back(int(i), int(j), -a);
      };
      if (c > 0) couple(i - 1, A.east(r, c - 1));
      if (c + 1 < n) couple(i + 1, A.east(r, c));
      if (r > 0) couple(i - n, A.north(r - 1, c));
      if (r + 1 < n) couple(i + n, A.north(r, c));
      trip.emplace_back(int(i), int(i), diag);
      trip.emplace_back(int(i), int(N), A.volume(r, c));
      trip.emplace_back(int(N), int(i), A.volume(r, c));
    }
  Eigen::SparseMatrix<double> M(int(N + 1), int(N + 1));
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd b(N + 1);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) b(r * n + c) = A.volume(r, c) * f(r, c);
  b(N) = 0.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(M);
  if (lu.info() != Eigen::Success) throw DegeneracyError("direct oracle: factorization failed");
  const Eigen::VectorXd x = lu.solve(b);
  Array2D<double> p(n, n);
  for (std::size_t i = 0; i < N; ++i) p.storage()[i] = x(i);
  remove_mean(p);
  return as_field(std::move(p));
}

}  // namespace wavinv::darcy
