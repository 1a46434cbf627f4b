#include "flexscat/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace flexscat {
namespace {

double norm2(const std::vector<cdouble>& v) {
  double s = 0.0;
  for (const cdouble& z : v) s += std::norm(z);
  return std::sqrt(s);
}

cdouble dot(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  cdouble s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

}  // namespace

SolveResult gmres_solve(const LinearMap& apply, const std::vector<cdouble>& b, const SolveConfig& cfg) {
  if (!(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance < 1.0)) throw std::invalid_argument("gmres: tolerance must be in (0, 1)");
  if (cfg.max_iterations < 1) throw std::invalid_argument("gmres: max_iterations must be >= 1");
  if (cfg.restart < 0) throw std::invalid_argument("gmres: restart must be >= 0");
  const std::size_t n = b.size();
  SolveResult res;
  res.x.assign(n, 0.0);
  const double bnorm = norm2(b);
  res.residual_history.push_back(bnorm == 0.0 ? 0.0 : 1.0);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  const int m = cfg.restart > 0 ? cfg.restart : cfg.max_iterations;
  std::vector<cdouble> r = b;
  double rnorm = bnorm;
  while (res.iterations < cfg.max_iterations) {
    std::vector<std::vector<cdouble>> V;
    V.reserve(std::min(m, cfg.max_iterations) + 1);
    V.emplace_back(n);
    for (std::size_t i = 0; i < n; ++i) V[0][i] = r[i] / rnorm;
    std::vector<std::vector<cdouble>> H;  // H[j] is column j, length j + 2
    std::vector<double> cs;
    std::vector<cdouble> sn, g{rnorm};
    int j = 0;
    bool done = false;
    for (; j < m && res.iterations < cfg.max_iterations; ++j) {
      std::vector<cdouble> w = apply(V[j]);
      std::vector<cdouble> h(j + 2, 0.0);
      // modified Gram-Schmidt, two passes
      for (int pass = 0; pass < 2; ++pass)
        for (int i = 0; i <= j; ++i) {
          const cdouble c = dot(V[i], w);
          h[i] += c;
          for (std::size_t q = 0; q < n; ++q) w[q] -= c * V[i][q];
        }
      const double wn = norm2(w);
      h[j + 1] = wn;
      for (int i = 0; i < j; ++i) {
        const cdouble t = cs[i] * h[i] + sn[i] * h[i + 1];
        h[i + 1] = -std::conj(sn[i]) * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      const double a = std::abs(h[j]), bb = std::abs(h[j + 1]);
      const double den = std::hypot(a, bb);
      double c;
      cdouble s;
      if (a == 0.0) {
        c = 0.0;
        s = std::conj(h[j + 1]) / bb;
      } else {
        c = a / den;
        s = (h[j] / a) * std::conj(h[j + 1]) / den;
      }
      h[j] = c * h[j] + s * h[j + 1];
      h[j + 1] = 0.0;
      cs.push_back(c);
      sn.push_back(s);
      g.push_back(-std::conj(s) * g[j]);
      g[j] = c * g[j];
      H.push_back(std::move(h));
      ++res.iterations;
      const double est = std::abs(g[j + 1]) / bnorm;
      res.residual_history.push_back(est);
      if (est <= cfg.rel_tolerance || wn <= 1e-300) {
        done = true;
        ++j;
        break;
      }
      V.emplace_back(n);
      for (std::size_t q = 0; q < n; ++q) V[j + 1][q] = w[q] / wn;
    }
    // back substitution on the rotated Hessenberg
    std::vector<cdouble> y(j);
    for (int i = j - 1; i >= 0; --i) {
      cdouble s = g[i];
      for (int k = i + 1; k < j; ++k) s -= H[k][i] * y[k];
      y[i] = s / H[i][i];
    }
    for (int i = 0; i < j; ++i)
      for (std::size_t q = 0; q < n; ++q) res.x[q] += y[i] * V[i][q];
    if (done) break;
    const std::vector<cdouble> ax = apply(res.x);
    for (std::size_t q = 0; q < n; ++q) r[q] = b[q] - ax[q];
    rnorm = norm2(r);
    if (rnorm / bnorm <= cfg.rel_tolerance) break;
  }
  const std::vector<cdouble> ax = apply(res.x);
  std::vector<cdouble> rr(n);
  for (std::size_t q = 0; q < n; ++q) rr[q] = b[q] - ax[q];
  res.true_residual = norm2(rr) / bnorm;
  res.converged = res.residual_history.back() <= cfg.rel_tolerance;
  return res;
}

ScatterSolution solve_scatter(const ScatterProblem& p) {
  ScatterSolution s;
  s.field = build_field(p.profile, p.ice, p.grid);
  const CoefficientField& f = s.field;
  if (f.c_hi >= f.c_lo &&
      (f.c_lo == 0 || f.r_lo == 0 || f.c_hi == p.grid.cols() - 1 || f.r_hi == p.grid.rows() - 1))
    throw std::invalid_argument("solve_scatter: the grid does not cover the support of the perturbation");
  s.dispersion = solve_dispersion(f.params());
  if (auto w = check_incident(p.incident, s.dispersion)) s.warnings.push_back(*w);
  s.table = cached_corrections(s.dispersion, p.grid.h, p.order);
  if (f.c_hi < f.c_lo) {
    // nothing scatters
    s.support = sub_grid(p.grid, p.grid.cols() / 2, p.grid.cols() / 2, p.grid.rows() / 2, p.grid.rows() / 2);
    s.mu = DensityGrid(s.support);
    s.rhs = DensityGrid(s.support);
    s.stats.converged = true;
    s.stats.residual_history = {0.0};
    return s;
  }
  const CoefficientField sub = restrict_to_support(f);
  s.support = sub.grid;
  const LsOperator op(sub, s.dispersion, s.table);
  s.rhs = build_rhs(p.incident, sub, s.dispersion);
  s.stats = gmres_solve([&](const std::vector<cdouble>& v) { return op.apply(v); }, s.rhs.values, p.solver);
  s.mu = DensityGrid(s.support);
  s.mu.values = s.stats.x;
  return s;
}

}  // namespace flexscat
