#include "flexscat/greens.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "flexscat/specfun.hpp"

namespace flexscat {
namespace {

using specfun::ComboKind;
using specfun::stable_combo_derivs;

constexpr double kPi = std::numbers::pi;
const cdouble kI(0.0, 1.0);

// f_j(r) = K0(-rho_j r) + (2/pi) log r and its r-derivatives; the log r parts
// cancel in both G_S and G_phi by the vanishing moments M_1 = M_2 = 0.
std::array<cdouble, 4> root_profile(const DispersionData& d, int j, double r, int max_order) {
  const cdouble rho = d.roots[j];
  std::array<cdouble, 4> f{};
  if (j == d.radiating_index) {
    // -K0(x) + 2 i H0(x) + (2/pi) log r = -S0(x) + 8 T0(x) - (2/pi) log rho_1
    const double k = rho.real();
    const double x = k * r;
    auto s = stable_combo_derivs(ComboKind::struve_log, 0, x, max_order);
    auto t = stable_combo_derivs(ComboKind::hankel_log, 0, x, max_order);
    double kp = 1.0;
    for (int m = 0; m <= max_order; ++m) {
      f[m] = kp * (-s[m] + 8.0 * t[m]);
      kp *= k;
    }
    f[0] -= 2.0 / kPi * std::log(k);
    return f;
  }
  const cdouble mr = -rho;
  auto s = stable_combo_derivs(ComboKind::struve_log, 0, mr * r, max_order);
  cdouble p = 1.0;
  for (int m = 0; m <= max_order; ++m) {
    f[m] = p * s[m];
    p *= mr;
  }
  f[0] -= 2.0 / kPi * std::log(mr);
  return f;
}

cdouble log_minus_rho(const DispersionData& d, int j) {
  if (j == d.radiating_index) return std::log(d.roots[j].real()) - kI * kPi;
  return std::log(-d.roots[j]);
}

// sum_j e_j rho_j^q through the exact recurrence M_{q+5} = (beta0 M_{q+1} - gamma M_q) / alpha0.
cdouble exact_moment(const DispersionData& d, int q) {
  std::vector<cdouble> m(std::max(q + 1, 8), 0.0);
  m[4] = 1.0 / d.params.alpha0;
  for (int n = 8; n <= q; ++n) m[n] = (d.params.beta0 * m[n - 4] - d.params.gamma * m[n - 5]) / d.params.alpha0;
  return m[q];
}

}  // namespace

RadialGreens eval_radial(const DispersionData& d, double r, int max_order) {
  if (max_order < 0 || max_order > 3) throw std::invalid_argument("eval_radial: max_order must be 0..3");
  if (!(r >= 0.0)) throw std::invalid_argument("eval_radial: r must be non-negative");
  RadialGreens out;
  if (r == 0.0) {
    out.gs[0] = eval_GS_limit(d);
    out.gphi = eval_Gphi_limit(d);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int m = 1; m <= max_order; ++m) out.gs[m] = m == 1 ? cdouble(0.0) : cdouble(nan, nan);
    return out;
  }
  for (int j = 0; j < 5; ++j) {
    auto f = root_profile(d, j, r, max_order);
    const cdouble e = d.residues[j], rho = d.roots[j];
    const cdouble ws = 0.5 * e * rho * rho, wp = 0.25 * e * rho;
    for (int m = 0; m <= max_order; ++m) out.gs[m] += ws * f[m];
    out.gphi += wp * f[0];
  }
  return out;
}

cdouble eval_GS(const DispersionData& d, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("eval_GS: r must be positive (use eval_GS_limit)");
  return eval_radial(d, r, 0).gs[0];
}

cdouble eval_Gphi(const DispersionData& d, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("eval_Gphi: r must be positive (use eval_Gphi_limit)");
  return eval_radial(d, r, 0).gphi;
}

cdouble eval_GS_limit(const DispersionData& d) {
  cdouble acc = 0.0;
  for (int j = 0; j < 5; ++j) acc += d.residues[j] * d.roots[j] * d.roots[j] * log_minus_rho(d, j);
  return -acc / kPi;
}

cdouble eval_Gphi_limit(const DispersionData& d) {
  cdouble acc = 0.0;
  for (int j = 0; j < 5; ++j) acc += d.residues[j] * d.roots[j] * log_minus_rho(d, j);
  return -acc / (2.0 * kPi);
}

GreensEval assemble_derivatives(const RadialGreens& rad, double dx, double dy) {
  GreensEval g;
  const double r = std::hypot(dx, dy);
  g.r = r;
  g.g_s = rad.gs[0];
  g.g_phi = rad.gphi;
  if (r == 0.0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    g.grad = {0.0, 0.0};
    g.hessian = {cdouble(nan, nan), cdouble(nan, nan), cdouble(nan, nan)};
    g.laplacian = cdouble(nan, nan);
    g.grad_laplacian = {cdouble(nan, nan), cdouble(nan, nan)};
    return g;
  }
  const double ux = dx / r, uy = dy / r;
  const cdouble m1 = rad.gs[1];
  const cdouble m2 = rad.gs[2] + rad.gs[1] / r;
  // M3 = -(Delta G)'
  const cdouble m3 = -(rad.gs[3] + rad.gs[2] / r - rad.gs[1] / (r * r));
  g.grad = {ux * m1, uy * m1};
  const cdouble t = m1 / r;
  const cdouble s = rad.gs[2] - t;
  g.hessian = {t + ux * ux * s, ux * uy * s, t + uy * uy * s};
  g.laplacian = m2;
  g.grad_laplacian = {-ux * m3, -uy * m3};
  return g;
}

GreensEval eval_derivatives(const DispersionData& d, double dx, double dy) {
  return assemble_derivatives(eval_radial(d, std::hypot(dx, dy), 3), dx, dy);
}

RadialGreens eval_radial_raw(const DispersionData& d, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("eval_radial_raw: r must be positive");
  RadialGreens out;
  const double tp = 2.0 / kPi;
  for (int j = 0; j < 5; ++j) {
    const cdouble e = d.residues[j], rho = d.roots[j];
    std::array<cdouble, 4> f;
    if (j == d.radiating_index) {
      // -K0(x) + 2 i H0(x), x = rho r
      const double k = rho.real(), x = k * r;
      cdouble k0 = specfun::struve_K(0, x).value, k1 = specfun::struve_K(1, x).value;
      cdouble h0 = specfun::hankel1(0, x).value, h1 = specfun::hankel1(1, x).value;
      cdouble u0 = -k0 + 2.0 * kI * h0;
      cdouble u1 = -(tp - k1) - 2.0 * kI * h1;
      cdouble u2 = -(-k0 + k1 / x) + 2.0 * kI * (-h0 + h1 / x);
      cdouble u3 = -(k1 - tp + k0 / x - 2.0 * k1 / (x * x)) + 2.0 * kI * (h1 + h0 / x - 2.0 * h1 / (x * x));
      f = {u0, k * u1, k * k * u2, k * k * k * u3};
    } else {
      const cdouble z = -rho * r, c = -rho;
      cdouble k0 = specfun::struve_K(0, z).value, k1 = specfun::struve_K(1, z).value;
      f = {k0, c * (tp - k1), c * c * (-k0 + k1 / z), c * c * c * (k1 - tp + k0 / z - 2.0 * k1 / (z * z))};
    }
    for (int m = 0; m < 4; ++m) out.gs[m] += 0.5 * e * rho * rho * f[m];
    out.gphi += 0.25 * e * rho * f[0];
  }
  return out;
}

cdouble SmallRExpansion::eval(double r) const {
  cdouble acc = 0.0;
  const double lr = std::log(r);
  for (size_t k = 0; k < a.size(); ++k) {
    const double r2k = std::pow(r, 2.0 * k);
    acc += a[k] * r2k + b[k] * r2k * lr + c[k] * r2k * r;
  }
  return acc;
}

SmallRExpansion small_r_expansion(const DispersionData& d, bool phi, int terms) {
  SmallRExpansion s;
  const int shift = phi ? 1 : 0;
  const double pre_log = phi ? 1.0 / (2.0 * kPi) : 1.0 / kPi;
  const double pre_pow = phi ? 0.25 : 0.5;
  double fact = 1.0;
  for (int k = 0; k < terms; ++k) {
    if (k > 0) fact *= k;
    double hk = 0.0;
    for (int j = 1; j <= k; ++j) hk += 1.0 / j;
    const double sign = (k % 2) ? -1.0 : 1.0;
    const int q = 2 * k + 2 - shift;
    cdouble nq = 0.0;
    for (int j = 0; j < 5; ++j) nq += d.residues[j] * std::pow(d.roots[j], q) * (log_minus_rho(d, j) - std::numbers::ln2);
    const double w = sign / (std::pow(4.0, k) * fact * fact);
    const cdouble mq = exact_moment(d, q);
    s.a.push_back(-pre_log * w * (mq * (std::numbers::egamma - hk) + nq));
    s.b.push_back(-pre_log * w * mq);
    const double g = std::tgamma(k + 1.5);
    s.c.push_back(-pre_pow * sign * exact_moment(d, q + 1) / (std::pow(2.0, 2 * k + 1) * g * g));
  }
  return s;
}

}  // namespace flexscat
