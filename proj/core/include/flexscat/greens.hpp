#pragma once

#include <array>
#include <complex>
#include <vector>

#include "flexscat/dispersion.hpp"

namespace flexscat {

// Radial profiles and their r-derivatives: gs[k] = d^k G_S / dr^k, k <= 3.
struct RadialGreens {
  std::array<cdouble, 4> gs{};
  cdouble gphi = 0.0;
};

struct GreensEval {
  double r = 0.0;
  cdouble g_s = 0.0;
  cdouble g_phi = 0.0;
  std::array<cdouble, 2> grad{};
  // xx, xy, yy
  std::array<cdouble, 3> hessian{};
  cdouble laplacian = 0.0;
  std::array<cdouble, 2> grad_laplacian{};
};

// G_S(r) = 1/2 sum_j e_j rho_j^2 K0(-rho_j r), with the rho_1 term replaced by
// 1/2 e_1 rho_1^2 [-K0(rho_1 r) + 2 i H0(rho_1 r)] in the radiating regime.
cdouble eval_GS(const DispersionData& d, double r);
cdouble eval_Gphi(const DispersionData& d, double r);

// Finite values at r = 0.
cdouble eval_GS_limit(const DispersionData& d);
cdouble eval_Gphi_limit(const DispersionData& d);

// Radial derivatives up to max_order (<= 3). r = 0 returns the limits with
// zero derivatives in slots that vanish there and NaN where they are singular.
RadialGreens eval_radial(const DispersionData& d, double r, int max_order = 3);

// Assemble gradient, Hessian, Laplacian and grad-Laplacian from the radial profile.
GreensEval assemble_derivatives(const RadialGreens& rad, double dx, double dy);
GreensEval eval_derivatives(const DispersionData& d, double dx, double dy);

// Direct sum of K0/K1 and H0/H1 terms without log cancellation. Loses relative
// accuracy as r -> 0; used to cross-check eval_radial at moderate r.
RadialGreens eval_radial_raw(const DispersionData& d, double r);

// Small-r expansion
//   G(r) = sum_k a_k r^2k + b_k r^2k log r + c_k r^(2k+1)
// for G_S (phi = false) or G_phi (phi = true).
struct SmallRExpansion {
  std::vector<cdouble> a, b, c;
  cdouble eval(double r) const;
};
SmallRExpansion small_r_expansion(const DispersionData& d, bool phi, int terms);

}  // namespace flexscat
