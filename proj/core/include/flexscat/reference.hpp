#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "flexscat/gauss_legendre.hpp"
#include "flexscat/quadrature.hpp"

namespace flexscat::reference {

// int w_k(v) mu(t - v) dv for all eight operator kernels, in polar coordinates
// about the target: dyadic Gauss-Legendre panels towards the singularity and
// a periodic trapezoid rule in angle.
inline std::array<cdouble, kNumKernels> polar_oracle(const DispersionData& d,
                                                     const std::function<double(double, double)>& mu, double tx,
                                                     double ty, double rmax, double panel = 0.25,
                                                     int angles = 96) {
  std::vector<double> rx, rw;
  auto add = [&](double a, double b) {
    GaussRule g = gauss_legendre(20, a, b);
    rx.insert(rx.end(), g.x.begin(), g.x.end());
    rw.insert(rw.end(), g.w.begin(), g.w.end());
  };
  const double r0 = 2 * panel;
  for (int k = 45; k >= 0; --k) add(r0 * std::ldexp(1.0, -k - 1), r0 * std::ldexp(1.0, -k));
  for (double a = r0; a < rmax; a += panel) add(a, a + panel);
  std::array<cdouble, kNumKernels> out{};
  const double dth = 2 * std::numbers::pi / angles;
  for (size_t i = 0; i < rx.size(); ++i) {
    const double r = rx[i];
    const RadialGreens rad = eval_radial(d, r, 3);
    for (int m = 0; m < angles; ++m) {
      const double vx = r * std::cos(m * dth), vy = r * std::sin(m * dth);
      const GreensEval e = assemble_derivatives(rad, vx, vy);
      const double f = mu(tx - vx, ty - vy) * r * rw[i] * dth;
      for (int k = 0; k < kNumKernels; ++k) out[k] += kernel_value(k, e) * f;
    }
  }
  return out;
}

// Corrected trapezoid sum on the lattice h Z^2 centred at the target (tx, ty).
inline std::array<cdouble, kNumKernels> corrected_lattice_sum(const DispersionData& d, const CorrectionTable& t,
                                                              const std::function<double(double, double)>& mu,
                                                              double tx, double ty, double half_width) {
  const double h = t.h;
  const int n = int(std::ceil(half_width / h));
  std::array<cdouble, kNumKernels> acc{};
  for (int j = -n; j <= n; ++j)
    for (int i = -n; i <= n; ++i) {
      if (i == 0 && j == 0) continue;
      const GreensEval e = eval_derivatives(d, -i * h, -j * h);
      const double m = mu(tx + i * h, ty + j * h) * h * h;
      for (int k = 0; k < kNumKernels; ++k) acc[k] += kernel_value(k, e) * m;
    }
  for (size_t q = 0; q < t.stencil.size(); ++q) {
    const double m = mu(tx - t.stencil[q].i * h, ty - t.stencil[q].j * h);
    for (int k = 0; k < kNumKernels; ++k) acc[k] += t.weights[k][q] * m;
  }
  return acc;
}

// Least-squares slope of log2(err) against -log2(h).
inline double fitted_slope(const std::vector<double>& hs, const std::vector<double>& errs) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(hs.size());
  for (size_t i = 0; i < hs.size(); ++i) {
    const double x = -std::log2(hs[i]), y = std::log2(errs[i]);
    sx += x, sy += y, sxx += x * x, sxy += x * y;
  }
  return -(n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace flexscat::reference
