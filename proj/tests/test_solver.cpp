#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "flexscat/solver.hpp"

using namespace flexscat;

namespace {

std::vector<cdouble> random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cdouble> v(n);
  for (auto& z : v) z = cdouble(g(rng), g(rng));
  return v;
}

// I + 0.3 R / sqrt(n): well conditioned, non-normal
Eigen::MatrixXcd random_matrix(int n, unsigned seed) {
  const auto v = random_vector(std::size_t(n) * n, seed);
  Eigen::MatrixXcd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) + 0.3 * v[std::size_t(i) * n + j] / std::sqrt(double(n));
  return a;
}

LinearMap as_map(const Eigen::MatrixXcd& a) {
  return [&a](const std::vector<cdouble>& x) {
    Eigen::VectorXcd y = a * Eigen::Map<const Eigen::VectorXcd>(x.data(), Eigen::Index(x.size()));
    return std::vector<cdouble>(y.data(), y.data() + y.size());
  };
}

double max_diff(const std::vector<cdouble>& a, const Eigen::VectorXcd& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b(Eigen::Index(i))));
  return e;
}

}  // namespace

TEST(Gmres, IdentityConvergesInOneIteration) {
  const auto b = random_vector(50, 1);
  SolveResult r = gmres_solve([](const std::vector<cdouble>& x) { return x; }, b);
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 1);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(std::abs(r.x[i] - b[i]), 0.0, 1e-15);
}

TEST(Gmres, ZeroRightHandSide) {
  SolveResult r = gmres_solve([](const std::vector<cdouble>& x) { return x; }, std::vector<cdouble>(7, 0.0));
  EXPECT_TRUE(r.converged);
  EXPECT_EQ(r.iterations, 0);
}

TEST(Gmres, MatchesDenseLuAndHistoryIsMonotone) {
  const Eigen::MatrixXcd a = random_matrix(120, 3);
  const auto b = random_vector(120, 4);
  SolveResult r = gmres_solve(as_map(a), b);
  ASSERT_TRUE(r.converged);
  const Eigen::VectorXcd x = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), 120));
  EXPECT_LT(max_diff(r.x, x), 1e-10);
  for (std::size_t i = 1; i < r.residual_history.size(); ++i)
    EXPECT_LE(r.residual_history[i], r.residual_history[i - 1]);
  EXPECT_NEAR(r.true_residual, r.residual_history.back(), 1e-10);
  EXPECT_LE(r.true_residual, 1e-11);
}

TEST(Gmres, RestartedVariantConverges) {
  const Eigen::MatrixXcd a = random_matrix(80, 5);
  const auto b = random_vector(80, 6);
  SolveConfig cfg;
  cfg.restart = 10;
  SolveResult r = gmres_solve(as_map(a), b, cfg);
  EXPECT_TRUE(r.converged);
  EXPECT_GT(r.iterations, 10);
  const Eigen::VectorXcd x = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(b.data(), 80));
  EXPECT_LT(max_diff(r.x, x), 1e-10);
}

TEST(Gmres, FlagsNonConvergence) {
  const Eigen::MatrixXcd a = random_matrix(60, 7);
  SolveConfig cfg;
  cfg.max_iterations = 3;
  SolveResult r = gmres_solve(as_map(a), random_vector(60, 8), cfg);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  EXPECT_LT(r.residual_history.back(), 1.0);
  cfg.rel_tolerance = 0.0;
  EXPECT_THROW(gmres_solve(as_map(a), random_vector(60, 8), cfg), std::invalid_argument);
}

TEST(Gmres, LinearInRightHandSide) {
  const Eigen::MatrixXcd a = random_matrix(60, 9);
  auto b = random_vector(60, 10);
  SolveResult r1 = gmres_solve(as_map(a), b);
  const cdouble s(2.5, -1.0);
  for (auto& z : b) z *= s;
  SolveResult r2 = gmres_solve(as_map(a), b);
  double e = 0.0, m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) e = std::max(e, std::abs(r2.x[i] - s * r1.x[i])), m = std::max(m, std::abs(r2.x[i]));
  EXPECT_LT(e / m, 1e-11);
}

TEST(SolveScatter, BumpMatchesDenseLu) {
  ScatterProblem p;
  p.ice.omega = 3.0;
  GaussianBump b;
  b.sigma = 1.0;
  b.amplitude = 0.5;
  p.profile = b;
  p.grid = square_grid(0.75, 11.0);
  ScatterSolution s = solve_scatter(p);
  ASSERT_TRUE(s.stats.converged);
  EXPECT_TRUE(s.warnings.empty());
  const CoefficientField sub = restrict_field(s.field, s.support);
  LsOperator op(sub, s.dispersion, s.table);
  const int n = int(sub.grid.size());
  ASSERT_LT(n, 700);
  Eigen::MatrixXcd a(n, n);
  std::vector<cdouble> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    const auto col = op.apply(e);
    for (int i = 0; i < n; ++i) a(i, j) = col[i];
    e[j] = 0.0;
  }
  const Eigen::VectorXcd x = a.partialPivLu().solve(Eigen::Map<const Eigen::VectorXcd>(s.rhs.values.data(), n));
  EXPECT_LT(max_diff(s.mu.values, x) / x.cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_LT(s.stats.iterations, 100);
  EXPECT_NEAR(s.stats.true_residual, s.stats.residual_history.back(), 1e-10);
}

TEST(SolveScatter, ConstantProfileGivesZeroDensity) {
  ScatterProblem p;
  p.profile = ConstantProfile{2.0};
  p.grid = square_grid(1.0, 5.0);
  ScatterSolution s = solve_scatter(p);
  EXPECT_TRUE(s.stats.converged);
  for (cdouble v : s.mu.values) EXPECT_EQ(v, cdouble(0.0));
}

TEST(SolveScatter, RejectsGridNotCoveringSupport) {
  ScatterProblem p;
  p.profile = GaussianBump{};
  p.grid = square_grid(0.5, 10.0);
  EXPECT_THROW(solve_scatter(p), std::invalid_argument);
}
