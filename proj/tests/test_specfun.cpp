#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "flexscat/specfun.hpp"

using namespace flexscat::specfun;
using cdouble = std::complex<double>;

#include "data/specfun_oracle.inc"

namespace {

double relerr(cdouble a, cdouble b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

const cdouble I(0, 1);

}  // namespace

TEST(StruveR, MatchesMpmath) {
  for (const auto& o : kSpecOracle) {
    if (o.z.imag() < 0) continue;
    SCOPED_TRACE(testing::Message() << "z = " << o.z);
    EXPECT_LT(relerr(struve_R(0, o.z).value, o.r0), 1e-12);
    EXPECT_LT(relerr(struve_R(1, o.z).value, o.r1), 1e-12);
    EXPECT_LT(relerr(struve_R(2, o.z).value, o.r2), 1e-11);
  }
}

TEST(StruveK, MatchesMpmath) {
  for (const auto& o : kSpecOracle) {
    SCOPED_TRACE(testing::Message() << "z = " << o.z);
    EXPECT_LT(relerr(struve_K(0, o.z).value, o.k0), 1e-12);
    EXPECT_LT(relerr(struve_K(1, o.z).value, o.k1), 1e-12);
  }
}

TEST(Hankel1, MatchesMpmath) {
  for (const auto& o : kSpecOracle) {
    if (!o.has_h) continue;
    SCOPED_TRACE(testing::Message() << "z = " << o.z);
    EXPECT_LT(relerr(hankel1(0, o.z).value, o.h0), 1e-12);
    EXPECT_LT(relerr(hankel1(1, o.z).value, o.h1), 1e-12);
  }
}

TEST(Hankel1, RejectsLowerHalfPlane) {
  EXPECT_THROW(hankel1(0, cdouble(1, -1)), std::domain_error);
  EXPECT_THROW(hankel1(0, 0.0), std::domain_error);
  EXPECT_THROW(struve_K(1, 0.0), std::domain_error);
  EXPECT_THROW(struve_R(0, cdouble(2, -1)), std::domain_error);
}

TEST(StruveR, TwoTermRecurrence) {
  // R_0 + R_2 = (2/z) R_1 + 2 i z / (3 pi)
  for (cdouble z : {cdouble(0.7, 0.1), cdouble(5, 3), cdouble(-40, 2), cdouble(120, 1), cdouble(0, 60)}) {
    cdouble lhs = struve_R(0, z).value + struve_R(2, z).value;
    cdouble rhs = 2.0 / z * struve_R(1, z).value + 2.0 * I * z / (3.0 * std::numbers::pi);
    EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (std::abs(lhs) + std::abs(rhs)));
  }
}

TEST(StruveK, IdentityWithR) {
  // K_n = -i (R_n - H^(1)_n) in the upper half-plane
  for (cdouble z : {cdouble(0.4, 0.0), cdouble(6, 1), cdouble(-7, 3), cdouble(50, 20)}) {
    for (int n = 0; n < 2; ++n) {
      cdouble k = struve_K(n, z).value;
      cdouble alt = -I * (struve_R(n, z).value - hankel1(n, z).value);
      EXPECT_LT(relerr(k, alt), 1e-12);
    }
  }
}

TEST(StruveK, ContinuousAcrossAsymptoticSeam) {
  const double r = kStruveAsymptoticRadius;
  for (double arg : {0.0, 0.3, 1.2, 1.7, 2.6, 3.1, -0.4, -2.9}) {
    cdouble a = std::polar(r * (1 - 1e-12), arg), b = std::polar(r * (1 + 1e-12), arg);
    ASSERT_NE(struve_K(0, a).branch, struve_K(0, b).branch);
    // first-order Taylor step across the seam: K0' = 2/pi - K1, K1' = K0 - K1/z
    cdouble k0 = struve_K(0, a).value, k1 = struve_K(1, a).value;
    cdouble ka[2] = {k0 + (2 / std::numbers::pi - k1) * (b - a), k1 + (k0 - k1 / a) * (b - a)};
    for (int n = 0; n < 2; ++n) {
      EXPECT_LT(relerr(ka[n], struve_K(n, b).value), 1e-12) << "arg " << arg;
    }
  }
}

TEST(Hankel1, ContinuousAcrossBranchSeams) {
  for (double r : {kHankelSeriesRadius, kHankelAsymptoticRadius}) {
    for (double arg : {0.0, 0.5, 1.5, 2.5, 3.0}) {
      cdouble a = std::polar(r * (1 - 1e-10), arg), b = std::polar(r * (1 + 1e-10), arg);
      ASSERT_NE(hankel1(0, a).branch, hankel1(0, b).branch);
      cdouble h0 = hankel1(0, a).value, h1 = hankel1(1, a).value;
      // H0' = -H1, H1' = H0 - H1/z
      EXPECT_LT(relerr(h0 - h1 * (b - a), hankel1(0, b).value), 1e-13);
      EXPECT_LT(relerr(h1 + (h0 - h1 / a) * (b - a), hankel1(1, b).value), 1e-13);
    }
  }
}

TEST(StruveK, ConjugateSymmetry) {
  for (cdouble z : {cdouble(2, 1), cdouble(-30, 5), cdouble(150, -7)}) {
    for (int n = 0; n < 2; ++n) {
      EXPECT_EQ(struve_K(n, std::conj(z)).value, std::conj(struve_K(n, z).value));
    }
  }
}

TEST(StableCombo, MatchesMpmathDerivatives) {
  for (const auto& o : kComboOracle) {
    ComboKind kind = o.kind == 0 ? ComboKind::hankel_log : ComboKind::struve_log;
    SCOPED_TRACE(testing::Message() << "kind " << o.kind << " n " << o.n << " z " << o.z);
    auto d = stable_combo_derivs(kind, o.n, o.z, o.z == 0.0 ? 0 : 3);
    EXPECT_LT(relerr(d[0], o.d[0]), 1e-12);
    if (o.z == 0.0) continue;
    for (int k = 1; k < 4; ++k) EXPECT_LT(std::abs(d[k] - o.d[k]), 1e-9 * (1 + std::abs(o.d[k]))) << "k " << k;
  }
}

TEST(StableCombo, LimitsAtOrigin) {
  const double c = std::numbers::ln2 - std::numbers::egamma;
  EXPECT_NEAR(std::abs(stable_combo(ComboKind::struve_log, 0, 0.0, 0) - 2.0 / std::numbers::pi * c), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(stable_combo(ComboKind::hankel_log, 0, 0.0, 0) - (c / (2 * std::numbers::pi) + 0.25 * I)),
              0.0, 1e-15);
  // bounded next to the origin
  EXPECT_LT(std::abs(stable_combo(ComboKind::struve_log, 0, 1e-12, 0) - 2.0 / std::numbers::pi * c), 1e-10);
}

TEST(StableCombo, ContinuousAcrossSeam) {
  for (ComboKind kind : {ComboKind::hankel_log, ComboKind::struve_log}) {
    for (int n = 0; n < 2; ++n) {
      for (double arg : {0.0, 0.8, 1.9, 3.0}) {
        cdouble a = std::polar(kComboSeriesRadius * (1 - 1e-12), arg);
        cdouble b = std::polar(kComboSeriesRadius * (1 + 1e-12), arg);
        ASSERT_NE(stable_combo_branch(a), stable_combo_branch(b));
        auto da = stable_combo_derivs(kind, n, a, 3), db = stable_combo_derivs(kind, n, b, 3);
        for (int k = 0; k < 3; ++k)
          EXPECT_LT(std::abs(da[k] + da[k + 1] * (b - a) - db[k]), 1e-12 * (1 + std::abs(da[k])));
        EXPECT_LT(std::abs(da[3] - db[3]), 1e-11 * (1 + std::abs(da[3])));
      }
    }
  }
}

TEST(StableCombo, DerivativesAgreeWithFiniteDifferences) {
  for (cdouble z : {cdouble(1.5, 0.5), cdouble(7, 2)}) {
    for (ComboKind kind : {ComboKind::hankel_log, ComboKind::struve_log}) {
      auto d = stable_combo_derivs(kind, 0, z, 3);
      const double h = 1e-4;
      for (int k = 0; k < 3; ++k) {
        cdouble fp = stable_combo(kind, 0, z + h, k), fm = stable_combo(kind, 0, z - h, k);
        EXPECT_LT(std::abs((fp - fm) / (2 * h) - d[k + 1]), 1e-7 * (1 + std::abs(d[k + 1])));
      }
    }
  }
}

TEST(StableCombo, InvalidArguments) {
  EXPECT_THROW(stable_combo(ComboKind::hankel_log, 0, cdouble(1, -1), 0), std::domain_error);
  EXPECT_THROW(stable_combo(ComboKind::struve_log, 2, 1.0, 0), std::invalid_argument);
  EXPECT_THROW(stable_combo(ComboKind::struve_log, 0, 1.0, 4), std::invalid_argument);
}
