#include "flexscat/specfun.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "flexscat/gauss_legendre.hpp"

namespace flexscat::specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kLn2 = std::numbers::ln2;
const cdouble kI(0.0, 1.0);

// One term z^p (A log z + B) of a logarithmic power series.
struct LogPowerTerm {
  int p;
  cdouble a;
  cdouble b;
};

using Series = std::vector<LogPowerTerm>;

constexpr int kSeriesTerms = 30;

double harmonic(int k) {
  double s = 0.0;
  for (int j = 1; j <= k; ++j) s += 1.0 / j;
  return s;
}

// Struve H_0
Series struve_h0_terms() {
  Series s;
  for (int k = 0; k < kSeriesTerms; ++k) {
    double g = std::tgamma(k + 1.5);
    double c = ((k % 2) ? -1.0 : 1.0) / (std::ldexp(1.0, 2 * k + 1) * g * g);
    s.push_back({2 * k + 1, 0.0, c});
  }
  return s;
}

Series struve_h1_terms() {
  Series s;
  for (int k = 0; k < kSeriesTerms; ++k) {
    double c = ((k % 2) ? -1.0 : 1.0) /
               (std::ldexp(1.0, 2 * k + 2) * std::tgamma(k + 1.5) * std::tgamma(k + 2.5));
    s.push_back({2 * k + 2, 0.0, c});
  }
  return s;
}

Series j0_terms() {
  Series s;
  double f = 1.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    if (k > 0) f *= k;
    double c = ((k % 2) ? -1.0 : 1.0) / (std::ldexp(1.0, 2 * k) * f * f);
    s.push_back({2 * k, 0.0, c});
  }
  return s;
}

Series j1_terms() {
  Series s;
  double f = 1.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    if (k > 0) f *= k;
    double c = ((k % 2) ? -1.0 : 1.0) / (std::ldexp(1.0, 2 * k + 1) * f * f * (k + 1));
    s.push_back({2 * k + 1, 0.0, c});
  }
  return s;
}

// P0 = (2/pi) log z - Y_0
Series p0_terms() {
  Series s;
  s.push_back({0, 0.0, 2.0 / kPi * (kLn2 - kEulerGamma)});
  double f = 1.0;
  for (int k = 1; k < kSeriesTerms; ++k) {
    f *= k;
    double c = -2.0 / kPi * ((k % 2) ? -1.0 : 1.0) / (std::ldexp(1.0, 2 * k) * f * f);
    s.push_back({2 * k, c, c * (kEulerGamma - kLn2 - harmonic(k))});
  }
  return s;
}

// P1 = -Y_1 - 2/(pi z)
Series p1_terms() {
  Series s;
  double f = 1.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    if (k > 0) f *= k;
    double j = ((k % 2) ? -1.0 : 1.0) / (std::ldexp(1.0, 2 * k + 1) * f * f * (k + 1));
    double psi = -2.0 * kEulerGamma + harmonic(k) + harmonic(k + 1);
    s.push_back({2 * k + 1, -2.0 / kPi * j, 2.0 / kPi * kLn2 * j + psi / kPi * j});
  }
  return s;
}

Series combine(const Series& x, cdouble cx, const Series& y, cdouble cy) {
  Series s;
  for (const auto& t : x) s.push_back({t.p, cx * t.a, cx * t.b});
  for (const auto& t : y) s.push_back({t.p, cy * t.a, cy * t.b});
  return s;
}

struct SeriesTable {
  Series j0, j1, p0, p1, s0, s1, t0, t1;
  SeriesTable() {
    j0 = j0_terms();
    j1 = j1_terms();
    p0 = p0_terms();
    p1 = p1_terms();
    s0 = combine(struve_h0_terms(), 1.0, p0, 1.0);
    s1 = combine(struve_h1_terms(), 1.0, p1, 1.0);
    t0 = combine(j0, 0.25 * kI, p0, 0.25);
    t1 = combine(j1, 0.25 * kI, p1, 0.25);
  }
};

const SeriesTable& tables() {
  static const SeriesTable t;
  return t;
}

// d^d/dz^d of a log-power series.
cdouble eval_series(const Series& s, cdouble z, int d) {
  if (z == 0.0) {
    cdouble acc = 0.0;
    for (auto t : s) {
      for (int j = 0; j < d; ++j) t = {t.p - 1, double(t.p) * t.a, double(t.p) * t.b + t.a};
      if (t.p == 0) {
        if (t.a != 0.0) throw std::domain_error("series: logarithmic singularity at 0");
        acc += t.b;
      } else if (t.p < 0 && (t.a != 0.0 || t.b != 0.0)) {
        throw std::domain_error("series: pole at 0");
      }
    }
    return acc;
  }
  const cdouble lz = std::log(z);
  const cdouble iz = 1.0 / z;
  cdouble acc = 0.0;
  for (auto t : s) {
    for (int j = 0; j < d; ++j) t = {t.p - 1, double(t.p) * t.a, double(t.p) * t.b + t.a};
    if (t.a == 0.0 && t.b == 0.0) continue;
    cdouble zp = t.p >= 0 ? std::pow(z, t.p) : std::pow(iz, -t.p);
    acc += zp * (t.a * lz + t.b);
  }
  return acc;
}

// Gauss-Legendre panels for the R_n integral over [0, pi/2]. Panels are graded
// towards theta = 0 where exp(i z sin theta) is sharply peaked for large Im z.
struct StruveRule {
  std::vector<double> sin_t, cos2_t, w;
};

StruveRule make_struve_rule() {
  const double h = kPi / 2;
  const double edges[] = {0.0, h / 512, h / 128, h / 32, h / 8, h / 4, h / 2, 3 * h / 4, h};
  const int counts[] = {8, 10, 14, 20, 24, 30, 30, 30};
  StruveRule r;
  for (int p = 0; p < 8; ++p) {
    GaussRule g = gauss_legendre(counts[p], edges[p], edges[p + 1]);
    for (size_t i = 0; i < g.x.size(); ++i) {
      r.sin_t.push_back(std::sin(g.x[i]));
      double c = std::cos(g.x[i]);
      r.cos2_t.push_back(c * c);
      r.w.push_back(g.w[i]);
    }
  }
  return r;
}

const StruveRule& struve_rule() {
  static const StruveRule r = make_struve_rule();
  return r;
}

// R_0, R_1, R_2 by quadrature.
std::array<cdouble, 3> struve_R_quad(cdouble z, const StruveRule& rule) {
  cdouble i0 = 0.0, i1 = 0.0, i2 = 0.0;
  const double zr = z.real(), zi = z.imag();
  for (size_t k = 0; k < rule.w.size(); ++k) {
    const double s = rule.sin_t[k];
    const double mag = std::exp(-zi * s) * rule.w[k];
    const cdouble e(mag * std::cos(zr * s), mag * std::sin(zr * s));
    const double c2 = rule.cos2_t[k];
    i0 += e;
    i1 += e * c2;
    i2 += e * (c2 * c2);
  }
  // R_n = 2 (z/2)^n / (sqrt(pi) Gamma(n + 1/2)) * I_n
  return {2.0 / kPi * i0, 2.0 / kPi * z * i1, 2.0 / (3.0 * kPi) * z * z * i2};
}

// Composite rule on [0, 7] for the Hankel integral representation.
const GaussRule& hankel_rule() {
  static const GaussRule rule = [] {
    GaussRule r;
    const double edges[] = {0.0, 1.0, 2.0, 3.0, 4.0, 5.5, 7.0};
    for (int p = 0; p < 6; ++p) {
      GaussRule g = gauss_legendre(20, edges[p], edges[p + 1]);
      r.x.insert(r.x.end(), g.x.begin(), g.x.end());
      r.w.insert(r.w.end(), g.w.begin(), g.w.end());
    }
    return r;
  }();
  return rule;
}

std::pair<cdouble, cdouble> hankel01_series(cdouble z) {
  const auto& t = tables();
  cdouble j0 = eval_series(t.j0, z, 0), j1 = eval_series(t.j1, z, 0);
  cdouble y0 = 2.0 / kPi * std::log(z) - eval_series(t.p0, z, 0);
  cdouble y1 = -eval_series(t.p1, z, 0) - 2.0 / (kPi * z);
  return {j0 + kI * y0, j1 + kI * y1};
}

// H^(1)_nu(z) = sqrt(2/(pi z)) exp(i(z - nu pi/2 - pi/4)) / Gamma(nu + 1/2)
//               * int_0^inf 2 s^(2 nu) exp(-s^2) (1 + i s^2/(2 z))^(nu - 1/2) ds
std::pair<cdouble, cdouble> hankel01_integral(cdouble z) {
  const GaussRule& g = hankel_rule();
  const cdouble c = kI / (2.0 * z);
  cdouble a0 = 0.0, a1 = 0.0;
  for (size_t k = 0; k < g.x.size(); ++k) {
    const double s2 = g.x[k] * g.x[k];
    const double e = 2.0 * std::exp(-s2) * g.w[k];
    const cdouble q = 1.0 + c * s2;
    const cdouble rs = 1.0 / std::sqrt(q);
    a0 += e * rs;
    a1 += e * s2 * q * rs;
  }
  const cdouble pre = std::sqrt(2.0 / kPi) / std::sqrt(z);
  const cdouble ph0 = std::exp(kI * (z - kPi / 4));
  const cdouble ph1 = std::exp(kI * (z - 3 * kPi / 4));
  return {pre * ph0 * a0 / std::sqrt(kPi), pre * ph1 * a1 / (0.5 * std::sqrt(kPi))};
}

cdouble hankel_asym(int n, cdouble z) {
  const double mu = 4.0 * n * n;
  cdouble term = 1.0, sum = 1.0;
  double last = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= kI * (mu - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
    double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return std::sqrt(2.0 / kPi) / std::sqrt(z) * std::exp(kI * (z - n * kPi / 2 - kPi / 4)) * sum;
}

std::pair<cdouble, cdouble> hankel01_upper(cdouble z, Branch* branch) {
  const double az = std::abs(z);
  if (az <= kHankelSeriesRadius) {
    if (branch) *branch = Branch::series;
    return hankel01_series(z);
  }
  if (az <= kHankelAsymptoticRadius) {
    if (branch) *branch = Branch::integral;
    return hankel01_integral(z);
  }
  if (branch) *branch = Branch::asymptotic;
  return {hankel_asym(0, z), hankel_asym(1, z)};
}

// Large-|z| expansion of K_n, valid for |arg z| < pi (used with Re z >= 0).
cdouble struve_k_asym(int n, cdouble z) {
  // (1/pi) sum_k Gamma(k + 1/2) (z/2)^(n - 2k - 1) / Gamma(n + 1/2 - k)
  cdouble term = std::sqrt(kPi) / std::tgamma(n + 0.5) * std::pow(0.5 * z, n - 1);
  cdouble sum = term;
  const cdouble w = 4.0 / (z * z);
  double last = std::abs(term);
  for (int k = 0; k < 400; ++k) {
    term *= (k + 0.5) * (n - 0.5 - k) * w;
    double mag = std::abs(term);
    if (mag > last) break;
    sum += term;
    last = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / kPi;
}

// Struve K_0, K_1 for Im z >= 0.
std::pair<cdouble, cdouble> struve_k01_upper(cdouble z, Branch* branch) {
  const double az = std::abs(z);
  if (az < kStruveAsymptoticRadius) {
    if (branch) *branch = Branch::quadrature;
    auto r = struve_R_quad(z, struve_rule());
    auto [h0, h1] = hankel01_upper(z, nullptr);
    return {-kI * (r[0] - h0), -kI * (r[1] - h1)};
  }
  if (z.real() >= 0.0) {
    if (branch) *branch = Branch::asymptotic;
    return {struve_k_asym(0, z), struve_k_asym(1, z)};
  }
  // K_n(w e^{i pi}) = (-1)^(n+1) [K_n(w) + 2 i H^(2)_n(w)], w = -z in the lower half-plane
  if (branch) *branch = Branch::reflection;
  const cdouble wb = std::conj(-z);
  const cdouble k0w = std::conj(struve_k_asym(0, wb)), k1w = std::conj(struve_k_asym(1, wb));
  const cdouble h0w = std::conj(hankel_asym(0, wb)), h1w = std::conj(hankel_asym(1, wb));
  return {-(k0w + 2.0 * kI * h0w), k1w + 2.0 * kI * h1w};
}

std::pair<cdouble, cdouble> struve_k01(cdouble z, Branch* branch) {
  if (z == 0.0) throw std::domain_error("struve_K: z = 0");
  if (z.imag() < 0.0) {
    auto [a, b] = struve_k01_upper(std::conj(z), branch);
    return {std::conj(a), std::conj(b)};
  }
  return struve_k01_upper(z, branch);
}

void check_order(int n, int lo, int hi, const char* what) {
  if (n < lo || n > hi) throw std::invalid_argument(std::string(what) + ": unsupported order");
}

}  // namespace

SpecFunValue struve_R(int n, cdouble z) {
  check_order(n, 0, 2, "struve_R");
  if (z.imag() < 0.0) throw std::domain_error("struve_R: Im z < 0");
  const double az = std::abs(z);
  if (az < kStruveAsymptoticRadius) {
    return {struve_R_quad(z, struve_rule())[n], Branch::quadrature};
  }
  // R_n = i K_n + H^(1)_n
  if (n == 2) {
    // R_2 = (2/z) R_1 - R_0 + 2 i z / (3 pi)
    auto [k0, k1] = struve_k01(z, nullptr);
    auto [h0, h1] = hankel01_upper(z, nullptr);
    cdouble r0 = kI * k0 + h0, r1 = kI * k1 + h1;
    return {2.0 / z * r1 - r0 + kI * 2.0 * z / (3.0 * kPi), Branch::asymptotic};
  }
  Branch b;
  auto [k0, k1] = struve_k01(z, &b);
  auto [h0, h1] = hankel01_upper(z, nullptr);
  return {n == 0 ? kI * k0 + h0 : kI * k1 + h1, b};
}

SpecFunValue struve_K(int n, cdouble z) {
  check_order(n, 0, 1, "struve_K");
  Branch b;
  auto [k0, k1] = struve_k01(z, &b);
  return {n == 0 ? k0 : k1, b};
}

SpecFunValue hankel1(int n, cdouble z) {
  check_order(n, 0, 1, "hankel1");
  if (z == 0.0) throw std::domain_error("hankel1: z = 0");
  if (z.imag() < 0.0) throw std::domain_error("hankel1: Im z < 0");
  if (z.imag() == 0.0 && z.real() < 0.0) {
    // H^(1)_n(x e^{i pi}) = -(-1)^n conj(H^(1)_n(x))
    auto [h0, h1] = hankel01_upper(-z, nullptr);
    return {n == 0 ? -std::conj(h0) : std::conj(h1), Branch::reflection};
  }
  Branch b;
  auto [h0, h1] = hankel01_upper(z, &b);
  return {n == 0 ? h0 : h1, b};
}

cdouble bessel_j_series(int n, cdouble z) {
  check_order(n, 0, 1, "bessel_j_series");
  return eval_series(n == 0 ? tables().j0 : tables().j1, z, 0);
}

Branch stable_combo_branch(cdouble z) {
  return std::abs(z) <= kComboSeriesRadius ? Branch::series : Branch::quadrature;
}

std::array<cdouble, 4> stable_combo_derivs(ComboKind kind, int n, cdouble z, int max_order) {
  check_order(n, 0, 1, "stable_combo");
  if (max_order < 0 || max_order > 3) throw std::invalid_argument("stable_combo: order > 3");
  if (kind == ComboKind::hankel_log && z.imag() < 0.0)
    throw std::domain_error("stable_combo: hankel_log needs Im z >= 0");
  std::array<cdouble, 4> out{};
  if (std::abs(z) <= kComboSeriesRadius) {
    const auto& t = tables();
    const Series& s = kind == ComboKind::struve_log ? (n == 0 ? t.s0 : t.s1) : (n == 0 ? t.t0 : t.t1);
    for (int d = 0; d <= max_order; ++d) out[d] = eval_series(s, z, d);
    return out;
  }
  const cdouble iz = 1.0 / z, iz2 = iz * iz, iz3 = iz2 * iz, iz4 = iz2 * iz2;
  if (kind == ComboKind::struve_log) {
    auto [k0, k1] = struve_k01(z, nullptr);
    const double tp = 2.0 / kPi;
    if (n == 0) {
      out[0] = k0 + tp * std::log(z);
      out[1] = tp - k1 + tp * iz;
      out[2] = -k0 + k1 * iz - tp * iz2;
      out[3] = k1 - tp + k0 * iz - 2.0 * k1 * iz2 + 2.0 * tp * iz3;
    } else {
      out[0] = k1 - tp * iz;
      out[1] = k0 - k1 * iz + tp * iz2;
      out[2] = tp - k1 - k0 * iz + 2.0 * k1 * iz2 - 2.0 * tp * iz3;
      out[3] = -k0 + 2.0 * k1 * iz - tp * iz + 3.0 * k0 * iz2 - 6.0 * k1 * iz3 + 6.0 * tp * iz4;
    }
  } else {
    auto h = hankel1(0, z).value;
    auto h1 = hankel1(1, z).value;
    const cdouble q = 0.25 * kI;
    const double c = 1.0 / (2.0 * kPi);
    if (n == 0) {
      out[0] = q * h + c * std::log(z);
      out[1] = -q * h1 + c * iz;
      out[2] = q * (-h + h1 * iz) - c * iz2;
      out[3] = q * (h1 + h * iz - 2.0 * h1 * iz2) + 2.0 * c * iz3;
    } else {
      out[0] = q * h1 - c * iz;
      out[1] = q * (h - h1 * iz) + c * iz2;
      out[2] = q * (-h1 - h * iz + 2.0 * h1 * iz2) - 2.0 * c * iz3;
      out[3] = q * (-h + 2.0 * h1 * iz + 3.0 * h * iz2 - 6.0 * h1 * iz3) + 6.0 * c * iz4;
    }
  }
  for (int d = max_order + 1; d < 4; ++d) out[d] = 0.0;
  return out;
}

cdouble stable_combo(ComboKind kind, int n, cdouble z, int derivative_order) {
  return stable_combo_derivs(kind, n, z, derivative_order)[derivative_order];
}

}  // namespace flexscat::specfun
