#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>

#include "flexscat/quadrature.hpp"
#include "flexscat/reference.hpp"

using namespace flexscat;

namespace {

DispersionData dissipative_unit() { return solve_dispersion({1.0, cdouble(0.0, 1.0), -1.0, 0.3}); }

double gaussian(double x, double y) {
  const double dx = x - 0.3, dy = y + 0.2;
  return std::exp(-(dx * dx + dy * dy) / 0.5);
}

}  // namespace

TEST(ZetaMoments, MatchEpsteinZetaValues) {
  // tests/oracles/gen_zeta.py
  EXPECT_NEAR(zeta_moment(0, 0, 0, 1, 0, 0), -1.3105329259115095183, 1e-15);
  EXPECT_NEAR(zeta_moment(0, 0, 2, 1, 0, 0), -0.097186968010272926713, 1e-15);
  EXPECT_NEAR(zeta_moment(0, 0, 4, 1, 0, 0), 0.03044845705839327078, 1e-15);
  EXPECT_NEAR(zeta_moment(0, 0, 3, 0, 0, 0), -0.02939428164294600532, 1e-15);
}

TEST(ZetaMoments, ElementaryIdentities) {
  // constant kernel: the punctured sum misses exactly phi(0) = 1
  EXPECT_NEAR(zeta_moment(0, 0, 0, 0, 0, 0), 1.0, 1e-15);
  EXPECT_NEAR(zeta_moment(0, 0, 0, 0, 2, 0), 0.0, 1e-15);
  // x^2/r^2 + y^2/r^2 = 1
  EXPECT_NEAR(zeta_moment(2, 0, -2, 0, 0, 0), 0.5, 1e-15);
  EXPECT_NEAR(zeta_moment(2, 0, -2, 0, 2, 0) + zeta_moment(0, 2, -2, 0, 2, 0), 0.0, 1e-15);
  // x^2 r^s moment equals half the r^(s+2) moment
  EXPECT_NEAR(zeta_moment(0, 0, 2, 1, 2, 0), 0.5 * zeta_moment(0, 0, 4, 1, 0, 0), 1e-15);
  // parity
  EXPECT_EQ(zeta_moment(1, 0, -2, 0, 0, 0), 0.0);
  EXPECT_EQ(zeta_moment(1, 1, -2, 0, 1, 0), 0.0);
  EXPECT_THROW(zeta_moment(0, 0, -2, 0, 0, 0), std::invalid_argument);
}

TEST(CanonicalWeights, FitResidualsAndStencilSize) {
  for (int k = 0; k < kNumCanonical; ++k) {
    const StencilWeights& w = canonical_weights(Canonical(k));
    SCOPED_TRACE(canonical_name(Canonical(k)));
    EXPECT_LE(w.residual, 1e-12);
    EXPECT_LE(w.radius, 3);
    for (const Offset& o : w.offsets) EXPECT_LE(std::max(std::abs(o.i), std::abs(o.j)), 3);
  }
}

TEST(CanonicalWeights, SymmetriesOfTheSquare) {
  auto lookup = [](const StencilWeights& w, int i, int j) {
    for (size_t n = 0; n < w.offsets.size(); ++n)
      if (w.offsets[n].i == i && w.offsets[n].j == j) return w.weights[n];
    return 0.0;
  };
  for (int k = 0; k < kNumCanonical; ++k) {
    const Canonical c = Canonical(k);
    const CanonicalShape s = canonical_shape(c);
    const StencilWeights& w = canonical_weights(c);
    SCOPED_TRACE(canonical_name(c));
    for (const Offset& o : w.offsets) {
      const double v = lookup(w, o.i, o.j);
      EXPECT_EQ(lookup(w, -o.i, o.j), s.a % 2 ? -v : v);
      EXPECT_EQ(lookup(w, o.i, -o.j), s.b % 2 ? -v : v);
      if (s.swap_symmetric) EXPECT_EQ(lookup(w, o.j, o.i), v);
    }
  }
  // y-kernels are the transposes of the x-kernels
  const std::pair<Canonical, Canonical> pairs[] = {{Canonical::x_r2, Canonical::y_r2},
                                                   {Canonical::xx_r2, Canonical::yy_r2},
                                                   {Canonical::x_r2log, Canonical::y_r2log},
                                                   {Canonical::xx_r2log, Canonical::yy_r2log}};
  for (auto [x, y] : pairs) {
    const StencilWeights& wx = canonical_weights(x);
    const StencilWeights& wy = canonical_weights(y);
    ASSERT_EQ(wx.offsets.size(), wy.offsets.size());
    for (const Offset& o : wx.offsets) EXPECT_NEAR(lookup(wx, o.i, o.j), lookup(wy, o.j, o.i), 1e-14);
  }
}

TEST(CorrectionTable, OddKernelsHaveAntisymmetricWeights) {
  CorrectionTable t = build_corrections(dissipative_unit(), 0.1);
  for (const Offset& o : t.stencil) {
    EXPECT_EQ(t.weight(0, {-o.i, o.j}), -t.weight(0, o));
    EXPECT_EQ(t.weight(1, {o.i, -o.j}), -t.weight(1, o));
    EXPECT_EQ(t.weight(5, {-o.i, o.j}), -t.weight(5, o));
    EXPECT_EQ(t.weight(2, {-o.i, o.j}), t.weight(2, o));
  }
}

TEST(CorrectionTable, StabilitySumScalesLinearlyInH) {
  DispersionData d = dissipative_unit();
  double worst = 0.0;
  std::vector<double> bound;
  for (double h = 0.5; h >= 0.5 / 64; h /= 2) {
    CorrectionTable t = build_corrections(d, h), t2 = build_corrections(d, h / 2);
    double m = 0.0;
    for (int k = 0; k < kNumKernels; ++k) m = std::max(m, t.stability_sum(k));
    bound.push_back(m / h);
    worst = std::max(worst, m / h);
    // the d/dx Lap G kernel is dominated by its x/r^2 part, weights O(h)
    EXPECT_NEAR(t2.stability_sum(0) / t.stability_sum(0), 0.5, 0.02);
  }
  // max_j sum |alpha| <= C h with C fixed across the sequence
  for (double b : bound) EXPECT_LE(b, bound.front() * 1.001);
  EXPECT_LT(worst, 2.0);
}

TEST(CorrectionTable, ConvergenceOrderPerKernel) {
  DispersionData d = dissipative_unit();
  const auto ref = reference::polar_oracle(d, gaussian, 0.0, 0.0, 6.0);
  const std::vector<double> hs = {0.4, 0.2, 0.1, 0.05};
  std::array<std::vector<double>, kNumKernels> err;
  for (double h : hs) {
    const auto got = reference::corrected_lattice_sum(d, build_corrections(d, h), gaussian, 0.0, 0.0, 5.0);
    for (int k = 0; k < kNumKernels; ++k) err[k].push_back(std::abs(got[k] - ref[k]) / std::abs(ref[k]));
  }
  for (int k = 0; k < kNumKernels; ++k) {
    SCOPED_TRACE(kernel_name(k));
    EXPECT_GE(reference::fitted_slope(hs, err[k]), 5.7);
    EXPECT_LT(err[k].back(), 1e-8);
  }
}

TEST(ApplyCorrectedRule, ZeroDensityGivesZero) {
  DispersionData d = dissipative_unit();
  CorrectionTable t = build_corrections(d, 0.2);
  DensityGrid mu(square_grid(0.2, 1.0));
  for (int k = 0; k < kNumKernels; ++k) EXPECT_EQ(apply_corrected_rule(t, k, d, mu, 3, 4), cdouble(0.0));
}

TEST(ApplyCorrectedRule, MatchesDenseRowOn32x32Grid) {
  DispersionData d = dissipative_unit();
  Grid g;
  g.h = 0.15;
  g.nx = g.ny = 17;  // 33 x 33 nodes
  DensityGrid mu(g);
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) mu.at(c, r) = cdouble(std::cos(0.3 * c) * std::exp(-0.01 * r * r), 0.1 * (c - r));
  CorrectionTable t = build_corrections(d, g.h);
  for (int k = 0; k < kNumKernels; ++k) {
    for (auto [col, row] : {std::pair{0, 0}, {16, 16}, {1, 30}, {32, 5}}) {
      // dense Toeplitz row: h^2 w(x_i - x_j) off the diagonal plus the stencil weights
      cdouble want = 0.0;
      double scale = 0.0;
      for (int r = 0; r < g.rows(); ++r)
        for (int c = 0; c < g.cols(); ++c) {
          const int oi = col - c, oj = row - r;
          cdouble a = t.weight(k, {oi, oj});
          if (oi != 0 || oj != 0) a += g.h * g.h * kernel_value(k, eval_derivatives(d, g.h * oi, g.h * oj));
          want += a * mu.at(c, r);
          scale += std::abs(a * mu.at(c, r));
        }
      EXPECT_LT(std::abs(apply_corrected_rule(t, k, d, mu, col, row) - want), 1e-13 * scale) << kernel_name(k);
    }
  }
}

TEST(CorrectionTable, CacheRoundTrip) {
  DispersionData d = dissipative_unit();
  CorrectionTable t = build_corrections(d, 0.125);
  const std::string path = (std::filesystem::temp_directory_path() / "flexscat_corr_test.bin").string();
  save_corrections(t, d, path);
  CorrectionTable u;
  ASSERT_TRUE(load_corrections(u, d, 0.125, 6, path));
  ASSERT_EQ(u.stencil.size(), t.stencil.size());
  for (int k = 0; k < kNumKernels; ++k) EXPECT_EQ(u.weights[k], t.weights[k]);
  EXPECT_FALSE(load_corrections(u, d, 0.25, 6, path));
  EXPECT_FALSE(load_corrections(u, solve_dispersion({1.0, -1.0, -1.0, 0.3}), 0.125, 6, path));
  EXPECT_FALSE(load_corrections(u, d, 0.125, 6, path + ".missing"));
  std::filesystem::remove(path);
}
