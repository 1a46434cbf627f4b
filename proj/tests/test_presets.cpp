#include <gtest/gtest.h>

#include <cmath>

#include "app.hpp"

using namespace flexscat;
using namespace flexscat::app;

// The 12 km random medium, the ridge network and the spiral are too large to
// solve here at full size; reduced versions check determinism, that the
// density lives on the perturbation, and the boundary-condition residual.

namespace {

ScatterProblem preset(const std::string& name, const std::vector<std::string>& overrides) {
  return make_problem(load_config(std::string(FLEXSCAT_PRESETS) + "/" + name + ".json", overrides));
}

double residual(const ScatterProblem& p, const ScatterSolution& s, const std::vector<Point2>& samples) {
  double half = 0.0;
  for (const Point2& q : samples) half = std::max({half, std::abs(q[0] - p.grid.x0), std::abs(q[1] - p.grid.y0)});
  Grid t = square_grid(p.grid.h, half + 6 * p.grid.h);
  t.x0 = p.grid.x0, t.y0 = p.grid.y0;
  const FieldBundle b = reconstruct_fields(s.mu, s.dispersion, s.table, p.incident, t);
  return pde_residual(b, s.field, samples).rel_linf;
}

void expect_density_on_perturbation(const ScatterProblem& p, const ScatterSolution& s) {
  const Grid& g = p.grid;
  EXPECT_GT(s.support.x(0), g.x(0));
  EXPECT_LT(s.support.x(s.support.cols() - 1), g.x(g.cols() - 1));
  EXPECT_GT(s.support.y(0), g.y(0));
  EXPECT_LT(s.support.y(s.support.rows() - 1), g.y(g.rows() - 1));
  const CoefficientField f = restrict_field(s.field, s.support);
  std::size_t zeros = 0;
  for (std::size_t i = 0; i < s.mu.values.size(); ++i)
    if (!f.perturbed(i)) {
      EXPECT_EQ(s.mu.values[i], 0.0);
      ++zeros;
    }
  EXPECT_GT(zeros, 0u);
}

const std::vector<std::string> kSmallRandom = {"profile.half_extent_m=300", "half_width=1000"};

}  // namespace

TEST(RandomMediumPreset, DeterministicForAFixedSeed) {
  const ScatterProblem p = preset("random_medium", kSmallRandom);
  EXPECT_EQ(p.incident.kind, Incident::Kind::point_source);
  const ScatterSolution a = solve_scatter(p), b = solve_scatter(p);
  ASSERT_TRUE(a.stats.converged);
  EXPECT_EQ(a.mu.values, b.mu.values);
  EXPECT_NEAR(a.dispersion.wavenumber(), 0.0255, 5e-5);

  std::vector<std::string> o = kSmallRandom;
  o.push_back("seed=2");
  const ScatterSolution c = solve_scatter(preset("random_medium", o));
  EXPECT_NE(a.field.H, c.field.H);
  EXPECT_NE(a.mu.values, c.mu.values);
}

TEST(RandomMediumPreset, DensityOnPerturbationAndResidual) {
  std::vector<std::string> o = kSmallRandom;
  o.push_back("h=12.5");
  const ScatterProblem p = preset("random_medium", o);
  const ScatterSolution s = solve_scatter(p);
  ASSERT_TRUE(s.stats.converged);
  expect_density_on_perturbation(p, s);
  // away from the source singularity
  const std::vector<Point2> samples = {{-300, 0}, {300, 0}, {0, 300}, {0, -300},
                                       {200, 200}, {-200, -250}, {400, -100}, {-350, 150}};
  EXPECT_LT(residual(p, s, samples), 1e-4);
}

TEST(RidgePreset, ReducedNetworkResidual) {
  const ScatterProblem p = preset("ridges", {"profile.curves_m=[[[-40,0],[40,0]],[[0,0],[0,40]]]",
                                             "grid.center_m=[0,0]", "half_width=100", "h=1"});
  const ScatterSolution s = solve_scatter(p);
  ASSERT_TRUE(s.stats.converged);
  // 3 m on a ridge away from the junction
  EXPECT_NEAR(s.field.H[p.grid.index(p.grid.nx - 1 - 20, p.grid.ny - 1)], 3.0, 1e-2);
  expect_density_on_perturbation(p, s);
  const std::vector<Point2> samples = {{0, 5}, {-20, 6}, {25, 3}, {10, -8}, {-30, -10}, {0, 0}, {5, 10}, {-12, 4}};
  EXPECT_LT(residual(p, s, samples), 1e-4);
  EXPECT_EQ(solve_scatter(p).mu.values, s.mu.values);
}

TEST(SpiralPreset, ReducedGrooveResidual) {
  const ScatterProblem p = preset("spiral", {"profile.sigma_m=0.3", "profile.calibrate_min_m=0.7", "half_width=8", "h=0.05"});
  const ScatterSolution s = solve_scatter(p);
  ASSERT_TRUE(s.stats.converged);
  EXPECT_NEAR(s.field.min_thickness(), 0.7, 1e-6);
  expect_density_on_perturbation(p, s);
  const std::vector<Point2> samples = {{-0.65, 0}, {1, 0.5}, {2, -1}, {-3, 0.5}, {0, 2.5}, {3.5, 1}, {-1.5, -2}, {0.2, -0.3}};
  EXPECT_LT(residual(p, s, samples), 1e-4);
}
