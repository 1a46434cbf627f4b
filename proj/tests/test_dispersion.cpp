#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "flexscat/dispersion.hpp"

using namespace flexscat;

namespace {

double moment_scale(const DispersionData& d, int q) {
  double s = 0.0;
  for (int j = 0; j < 5; ++j) s += std::abs(d.residues[j]) * std::pow(std::abs(d.roots[j]), q);
  return s;
}

void expect_moments(const DispersionData& d, double tol) {
  const double a = d.params.alpha0;
  for (int q : {0, 1, 2, 3, 5, 6, 7}) {
    EXPECT_LT(std::abs(moment(d, q)), tol * moment_scale(d, q)) << "q = " << q;
  }
  EXPECT_LT(std::abs(moment(d, 4) - 1.0 / a), tol / a);
  // M_8 = beta0 / alpha0^2, M_9 = -gamma / alpha0^2
  EXPECT_LT(std::abs(moment(d, 8) - d.params.beta0 / (a * a)), tol * moment_scale(d, 8));
  EXPECT_LT(std::abs(moment(d, 9) + d.params.gamma / (a * a)), tol * moment_scale(d, 9));
}

}  // namespace

TEST(DeriveParams, TableOneConstants) {
  IcePreset ice;
  PhysicalParams p = derive_params(ice, 1.0);
  EXPECT_NEAR(p.alpha0, 7e9 / (12 * (1 - 0.33 * 0.33)), 1e-3);
  EXPECT_NEAR(p.alpha0, 6.545e8, 0.001 * 6.545e8);
  EXPECT_DOUBLE_EQ(p.beta0.real(), 917.0 - 10045.0);
  EXPECT_EQ(p.beta0.imag(), 0.0);
  EXPECT_DOUBLE_EQ(p.gamma, -1025.0);
}

TEST(DeriveParams, RejectsNonPositiveInputs) {
  IcePreset ice;
  EXPECT_THROW(derive_params(ice, 0.0), std::invalid_argument);
  EXPECT_THROW(derive_params(ice, -1.0), std::invalid_argument);
  ice.omega = 0.0;
  EXPECT_THROW(derive_params(ice, 1.0), std::invalid_argument);
  ice = IcePreset{};
  ice.poisson = 0.6;
  EXPECT_THROW(derive_params(ice, 1.0), std::invalid_argument);
}

TEST(SolveDispersion, RootsOfUnity) {
  DispersionData d = solve_dispersion({1.0, 0.0, -1.0, 0.3});
  ASSERT_EQ(d.regime(), Regime::radiating);
  EXPECT_EQ(d.roots[0], cdouble(1.0, 0.0));
  for (int j = 0; j < 5; ++j) {
    EXPECT_NEAR(std::abs(d.roots[j]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(std::pow(d.roots[j], 5) - 1.0), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(d.residues[j] - d.roots[j] / 5.0), 0.0, 1e-15);
  }
  EXPECT_NEAR(std::abs(moment(d, 4) - 1.0), 0.0, 1e-15);
}

TEST(SolveDispersion, MatchesPolynomialRootOracle) {
  // mpmath polyroots, tests/oracles/gen_dispersion.py
  IcePreset ice;
  DispersionData d = solve_dispersion(derive_params(ice, 5.0));
  const cdouble expect[5] = {{0.025519586512027696761, 0.0},
                             {-0.021491201282308130622, -0.016125170277479891144},
                             {0.0087314080262942822408, -0.024570566743016550018},
                             {0.0087314080262942822408, 0.024570566743016550018},
                             {-0.021491201282308130622, 0.016125170277479891144}};
  for (int j = 0; j < 5; ++j) EXPECT_LT(std::abs(d.roots[j] - expect[j]), 1e-12 * std::abs(expect[j]));
  expect_moments(d, 1e-12);
}

TEST(SolveDispersion, OmegaConventionForQuotedWavenumber) {
  // The quoted k = 0.0255 for H = 5 m corresponds to omega = 1 rad/s, not 2 pi rad/s.
  IcePreset ice;
  EXPECT_NEAR(solve_dispersion(derive_params(ice, 5.0)).wavenumber(), 0.0255, 5e-5);
  ice.omega = 2 * std::numbers::pi;
  EXPECT_NEAR(solve_dispersion(derive_params(ice, 5.0)).wavenumber(), 0.057233118223265884145, 1e-14);
}

TEST(SolveDispersion, OmegaForWavenumberInverts) {
  IcePreset ice;
  for (double k : {0.0235, 0.0265, 0.13, 1.05}) {
    for (double H : {1.0, 3.3}) {
      ice.omega = omega_for_wavenumber(ice, H, k);
      EXPECT_NEAR(solve_dispersion(derive_params(ice, H)).wavenumber(), k, 1e-13 * k);
    }
  }
}

TEST(SolveDispersion, RandomizedMomentRelations) {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 100; ++t) {
    PhysicalParams p;
    p.alpha0 = std::pow(10.0, u(rng));
    p.beta0 = cdouble(std::pow(10.0, u(rng)) * (u(rng) > 0 ? 1 : -1), t % 2 ? std::pow(10.0, u(rng)) : 0.0);
    p.gamma = -std::pow(10.0, u(rng));
    DispersionData d = solve_dispersion(p);
    SCOPED_TRACE(t);
    for (int j = 0; j < 5; ++j) {
      cdouble z = d.roots[j];
      double scale = std::max({p.alpha0 * std::pow(std::abs(z), 5), std::abs(p.beta0 * z), -p.gamma});
      EXPECT_LT(std::abs(p.alpha0 * std::pow(z, 5) - p.beta0 * z + p.gamma), 1e-12 * scale);
    }
    expect_moments(d, 1e-12);
  }
}

TEST(SolveDispersion, ExactlyOnePositiveRealRoot) {
  for (double b : {-9128.0, -1.0, 0.0, 2.0, 1e4}) {
    DispersionData d = solve_dispersion({6.5e8, b, -1025.0, 0.33});
    int count = 0;
    for (auto z : d.roots) count += (z.imag() == 0.0 && z.real() > 0.0);
    EXPECT_EQ(count, 1);
    EXPECT_GT(d.wavenumber(), 0.0);
  }
}

TEST(SolveDispersion, LimitingAbsorptionMovesRootUp) {
  PhysicalParams p{6.5e8, -9128.0, -1025.0, 0.33};
  DispersionData d0 = solve_dispersion(p);
  p.beta0 += cdouble(0.0, 1e-3 * 9128.0);
  DispersionData d1 = solve_dispersion(p);
  EXPECT_EQ(d1.regime(), Regime::dissipative);
  // the perturbed root closest to rho_1
  cdouble best = d1.roots[0];
  for (auto z : d1.roots)
    if (std::abs(z - d0.roots[0]) < std::abs(best - d0.roots[0])) best = z;
  EXPECT_GT(best.imag(), 0.0);
  EXPECT_LT(std::abs(best - d0.roots[0]), 1e-2 * d0.roots[0].real());
}

TEST(SolveDispersion, RejectsInadmissible) {
  EXPECT_THROW(solve_dispersion({0.0, 1.0, -1.0, 0.3}), std::invalid_argument);
  EXPECT_THROW(solve_dispersion({1.0, 1.0, 1.0, 0.3}), std::invalid_argument);
  EXPECT_THROW(solve_dispersion({1.0, cdouble(1.0, -1.0), -1.0, 0.3}), std::invalid_argument);
  // p(z) = z^5 - 5 z + 4 = (z - 1)^2 (z^3 + 2 z^2 + 3 z + 4)
  EXPECT_THROW(solve_dispersion({1.0, 5.0, -4.0, 0.3}), std::domain_error);
}
