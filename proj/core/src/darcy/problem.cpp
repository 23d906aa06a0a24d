#include "wavinv/darcy/problem.hpp"

#include <cmath>
#include <string>

#include "wavinv/error.hpp"
#include "wavinv/wavelet/transform2d.hpp"

namespace wavinv::darcy {

int DarcyProblem::level() const {
  const auto& v = log_permeability.values;
  if (v.rows() != v.cols() || !is_dyadic(v.rows(), Sampling::nodal) || v.rows() < 3)
    throw ShapeError("log-permeability must be a square (2^J+1)^2 node grid, got " + std::to_string(v.rows()) + "x" +
                     std::to_string(v.cols()));
  return log2_exact(v.rows() - 1);
}

void DarcyProblem::validate() const {
  level();
  if (log_permeability.sampling != Sampling::nodal) throw ShapeError("log-permeability must use nodal sampling");
  for (double v : log_permeability.values.storage())
    if (!std::isfinite(v) || !(std::exp(v) > 0.0) || !std::isfinite(std::exp(v)))
      throw DomainError("permeability exp(ln k) is not a finite positive number");
  double total = 0.0;
  for (const auto& s : sources) {
    if (!(s.x >= 0.0 && s.x <= 1.0 && s.y >= 0.0 && s.y <= 1.0))
      throw DomainError("source point outside [0,1]^2");
    total += s.c;
  }
  if (std::abs(total) > 1e-12) throw CompatibilityError("source strengths sum to " + std::to_string(total));
}

std::vector<SourcePoint> corner_sources() { return {{0.0, 0.0, 1.0}, {1.0, 1.0, -1.0}}; }

void SolverSettings::validate() const {
  if (finest_level_J < 1 || finest_level_J > 10) throw ParameterError("finest_level_J must lie in [1, 10]");
  if (!(residual_tolerance > 0.0)) throw ParameterError("residual tolerance must be positive");
  if (!(refinement_threshold > 0.0)) throw ParameterError("refinement threshold must be positive");
  if (max_vcycles < 1) throw ParameterError("max_vcycles must be >= 1");
  if (smoother_sweeps < 1) throw ParameterError("smoother_sweeps must be >= 1");
  if (coarsest_level < 1 || coarsest_level > finest_level_J)
    throw ParameterError("coarsest_level must lie in [1, finest_level_J]");
  if (half_width < 1) throw ParameterError("half_width must be >= 1");
  if (max_outer_iterations < 1) throw ParameterError("max_outer_iterations must be >= 1");
}

DarcyOperator::DarcyOperator(const Array2D<double>& k, int level) : level_(level) {
  n_ = (std::size_t{1} << level) + 1;
  if (k.rows() != n_ || k.cols() != n_)
    throw ShapeError("permeability grid is " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                     ", level " + std::to_string(level) + " needs " + std::to_string(n_));
  for (double v : k.storage())
    if (!(v > 0.0) || !std::isfinite(v)) throw DomainError("non-positive or non-finite permeability");
  h_ = 1.0 / double(n_ - 1);
  const auto w = [&](std::size_t i) { return (i == 0 || i == n_ - 1) ? 0.5 : 1.0; };
  vol_.resize(n_ * n_);
  ae_.resize(n_ * (n_ - 1));
  an_.resize((n_ - 1) * n_);
  diag_.assign(n_ * n_, 0.0);
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) vol_[r * n_ + c] = h_ * h_ * w(r) * w(c);
  // flux through a face = k_f * (dp / h) * (h * w) = k_f * w * dp
  for (std::size_t r = 0; r < n_; ++r)
    for (std::size_t c = 0; c + 1 < n_; ++c) {
      const double a = k(r, c), b = k(r, c + 1);
      const double v = 2.0 * a * b / (a + b) * w(r);
      ae_[r * (n_ - 1) + c] = v;
      diag_[r * n_ + c] += v;
      diag_[r * n_ + c + 1] += v;
    }
  for (std::size_t r = 0; r + 1 < n_; ++r)
    for (std::size_t c = 0; c < n_; ++c) {
      const double a = k(r, c), b = k(r + 1, c);
      const double v = 2.0 * a * b / (a + b) * w(c);
      an_[r * n_ + c] = v;
      diag_[r * n_ + c] += v;
      diag_[(r + 1) * n_ + c] += v;
    }
}

void DarcyOperator::apply(const Array2D<double>& p, Array2D<double>& out) const {
  const std::size_t n = n_, ne = n - 1;
  if (out.rows() != n || out.cols() != n) out = Array2D<double>(n, n);
  const double* P = p.flat().data();
  double* O = out.flat().data();
  const double* E = ae_.data();
  const double* N = an_.data();
  const auto edge = [&](std::size_t r, std::size_t c) {
    const std::size_t i = r * n + c;
    double s = diag_[i] * P[i];
    if (c > 0) s -= E[r * ne + c - 1] * P[i - 1];
    if (c + 1 < n) s -= E[r * ne + c] * P[i + 1];
    if (r > 0) s -= N[(r - 1) * n + c] * P[i - n];
    if (r + 1 < n) s -= N[r * n + c] * P[i + n];
    O[i] = s / vol_[i];
  };
  for (std::size_t c = 0; c < n; ++c) edge(0, c);
  for (std::size_t r = 1; r + 1 < n; ++r) {
    edge(r, 0);
    for (std::size_t c = 1; c + 1 < n; ++c) {
      const std::size_t i = r * n + c;
      O[i] = (diag_[i] * P[i] - E[r * ne + c - 1] * P[i - 1] - E[r * ne + c] * P[i + 1] -
              N[(r - 1) * n + c] * P[i - n] - N[r * n + c] * P[i + n]) /
             vol_[i];
    }
    edge(r, n - 1);
  }
  for (std::size_t c = 0; c < n; ++c) edge(n - 1, c);
}

void DarcyOperator::residual(const Array2D<double>& f, const Array2D<double>& p, Array2D<double>& out) const {
  apply(p, out);
  auto& o = out.storage();
  const auto& fs = f.storage();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = fs[i] - o[i];
}

void DarcyOperator::smooth(const Array2D<double>& f, Array2D<double>& p, int sweeps) const {
  const std::size_t n = n_, ne = n - 1;
  double* P = p.flat().data();
  const double* F = f.flat().data();
  const double* E = ae_.data();
  const double* N = an_.data();
  const auto update = [&](std::size_t r, std::size_t c) {
    const std::size_t i = r * n + c;
    double acc = vol_[i] * F[i];
    if (c > 0) acc += E[r * ne + c - 1] * P[i - 1];
    if (c + 1 < n) acc += E[r * ne + c] * P[i + 1];
    if (r > 0) acc += N[(r - 1) * n + c] * P[i - n];
    if (r + 1 < n) acc += N[r * n + c] * P[i + n];
    P[i] = acc / diag_[i];
  };
  for (int s = 0; s < sweeps; ++s)
    for (std::size_t color = 0; color < 2; ++color) {
      for (std::size_t c = color; c < n; c += 2) update(0, c);
      for (std::size_t r = 1; r + 1 < n; ++r) {
        const std::size_t c0 = (r + color) % 2;
        if (c0 == 0) update(r, 0);
        const std::size_t row = r * n;
        for (std::size_t c = c0 == 0 ? 2 : 1; c + 1 < n; c += 2) {
          const std::size_t i = row + c;
          P[i] = (vol_[i] * F[i] + E[r * ne + c - 1] * P[i - 1] + E[r * ne + c] * P[i + 1] +
                  N[(r - 1) * n + c] * P[i - n] + N[r * n + c] * P[i + n]) /
                 diag_[i];
        }
        if ((n - 1 + r + color) % 2 == 0) update(r, n - 1);
      }
      for (std::size_t c = (n - 1 + color) % 2; c < n; c += 2) update(n - 1, c);
    }
}

DarcyOperator discretize_operator(const DarcyProblem& problem, int level, int half_width) {
  problem.validate();
  const int J = problem.level();
  if (level < 1 || level > J)
    throw LevelError("operator level " + std::to_string(level) + " outside [1, " + std::to_string(J) + "]");
  Array2D<double> lnk = problem.log_permeability.values;
  const std::size_t stride = std::size_t{1} << (J - level);
  if (level < J) {
    wavelet::LiftingConfig cfg;
    cfg.half_width = half_width;
    cfg.boundary = wavelet::Boundary::reflect;
    wavelet::Transform2D tr(lnk.rows(), lnk.cols(), J - level, cfg);
    tr.forward(lnk);
  }
  const std::size_t n = (std::size_t{1} << level) + 1;
  Array2D<double> k(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) k(r, c) = std::exp(lnk(r * stride, c * stride));
  return DarcyOperator(k, level);
}

std::vector<DarcyOperator> discretize_hierarchy(const DarcyProblem& problem, int coarsest, int finest,
                                                int half_width) {
  problem.validate();
  const int J = problem.level();
  if (coarsest < 1 || coarsest > finest || finest > J)
    throw LevelError("operator levels [" + std::to_string(coarsest) + ", " + std::to_string(finest) +
                     "] outside [1, " + std::to_string(J) + "]");
  Array2D<double> lnk = problem.log_permeability.values;
  std::vector<DarcyOperator> ops(std::size_t(finest - coarsest + 1));
  const auto sample = [&](int level) {
    const std::size_t stride = std::size_t{1} << (J - level);
    const std::size_t n = (std::size_t{1} << level) + 1;
    Array2D<double> k(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) k(r, c) = std::exp(lnk(r * stride, c * stride));
    ops[std::size_t(level - coarsest)] = DarcyOperator(k, level);
  };
  if (finest == J) sample(J);
  if (coarsest < J) {
    wavelet::LiftingConfig cfg;
    cfg.half_width = half_width;
    cfg.boundary = wavelet::Boundary::reflect;
    wavelet::Transform2D tr(lnk.rows(), lnk.cols(), J - coarsest, cfg);
    // after transform level l the even-even nodes hold level J-l-1 scaling values
    for (int l = 0; l < J - coarsest; ++l) {
      tr.forward_level(lnk, l);
      if (J - l - 1 <= finest) sample(J - l - 1);
    }
  }
  return ops;
}

Array2D<double> discretize_source(const std::vector<SourcePoint>& sources, int level) {
  if (level < 1) throw LevelError("source level must be >= 1");
  const std::size_t n = (std::size_t{1} << level) + 1;
  const double h = 1.0 / double(n - 1);
  double total = 0.0;
  Array2D<double> f(n, n, 0.0);
  for (const auto& s : sources) {
    if (!(s.x >= 0.0 && s.x <= 1.0 && s.y >= 0.0 && s.y <= 1.0))
      throw DomainError("source point outside [0,1]^2");
    const auto c = static_cast<std::size_t>(std::lround(s.x / h));
    const auto r = static_cast<std::size_t>(std::lround(s.y / h));
    const double wx = (c == 0 || c == n - 1) ? 0.5 : 1.0;
    const double wy = (r == 0 || r == n - 1) ? 0.5 : 1.0;
    f(r, c) += s.c / (h * h * wx * wy);
    total += s.c;
  }
  if (std::abs(total) > 1e-12) throw CompatibilityError("source strengths sum to " + std::to_string(total));
  return f;
}

double weighted_mean(const Array2D<double>& p) {
  const std::size_t R = p.rows(), C = p.cols();
  double s = 0.0, w = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    const double wy = (r == 0 || r == R - 1) ? 0.5 : 1.0;
    for (std::size_t c = 0; c < C; ++c) {
      const double wt = wy * ((c == 0 || c == C - 1) ? 0.5 : 1.0);
      s += wt * p(r, c);
      w += wt;
    }
  }
  return s / w;
}

void remove_mean(Array2D<double>& p) {
  const double m = weighted_mean(p);
  for (auto& v : p.storage()) v -= m;
}

}  // namespace wavinv::darcy
