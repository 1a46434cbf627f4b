#include "flexscat/dispersion.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace flexscat {
namespace {

cdouble poly(const PhysicalParams& p, cdouble z) {
  cdouble z2 = z * z;
  return p.alpha0 * z2 * z2 * z - p.beta0 * z + p.gamma;
}

cdouble dpoly(const PhysicalParams& p, cdouble z) {
  cdouble z2 = z * z;
  return 5.0 * p.alpha0 * z2 * z2 - p.beta0;
}

cdouble newton_polish(const PhysicalParams& p, cdouble z) {
  for (int it = 0; it < 8; ++it) {
    cdouble dz = poly(p, z) / dpoly(p, z);
    z -= dz;
    if (std::abs(dz) <= 1e-16 * std::abs(z)) break;
  }
  return z;
}

double newton_polish_real(const PhysicalParams& p, double x) {
  const double b = p.beta0.real();
  for (int it = 0; it < 50; ++it) {
    double x4 = x * x * x * x;
    double f = p.alpha0 * x4 * x - b * x + p.gamma;
    double df = 5.0 * p.alpha0 * x4 - b;
    double dx = f / df;
    x -= dx;
    if (std::abs(dx) <= 1e-16 * std::abs(x)) break;
  }
  return x;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

double DispersionData::wavenumber() const {
  if (radiating_index < 0) throw std::logic_error("dispersion: no radiating root in the dissipative regime");
  return roots[radiating_index].real();
}

double flexural_rigidity(const IcePreset& ice, double thickness) {
  return ice.youngs_modulus * thickness * thickness * thickness / (12.0 * (1.0 - ice.poisson * ice.poisson));
}

cdouble beta_coefficient(const IcePreset& ice, double thickness) {
  return ice.rho_ice * thickness * ice.omega * ice.omega - ice.rho_sea * ice.g;
}

PhysicalParams derive_params(const IcePreset& ice, double thickness) {
  require_positive(ice.youngs_modulus, "youngs_modulus");
  require_positive(ice.rho_ice, "rho_ice");
  require_positive(ice.rho_sea, "rho_sea");
  require_positive(ice.g, "g");
  require_positive(ice.omega, "omega");
  require_positive(thickness, "thickness");
  if (!(ice.poisson > 0.0 && ice.poisson < 0.5)) throw std::invalid_argument("poisson ratio must lie in (0, 0.5)");
  PhysicalParams p;
  p.alpha0 = flexural_rigidity(ice, thickness);
  p.beta0 = beta_coefficient(ice, thickness);
  p.gamma = -ice.rho_sea * ice.omega * ice.omega;
  p.nu = ice.poisson;
  return p;
}

double omega_for_wavenumber(const IcePreset& ice, double thickness, double k) {
  require_positive(k, "wavenumber");
  require_positive(thickness, "thickness");
  const double a = flexural_rigidity(ice, thickness);
  const double w2 = (a * std::pow(k, 5) + ice.rho_sea * ice.g * k) / (ice.rho_ice * thickness * k + ice.rho_sea);
  return std::sqrt(w2);
}

DispersionData solve_dispersion(const PhysicalParams& params) {
  require_positive(params.alpha0, "alpha0");
  if (!(params.gamma < 0.0)) throw std::invalid_argument("gamma must be negative");
  if (params.beta0.imag() < 0.0) throw std::invalid_argument("Im beta0 must be non-negative");
  if (!std::isfinite(params.beta0.real()) || !std::isfinite(params.beta0.imag()))
    throw std::invalid_argument("beta0 must be finite");

  // z = s w with s^5 = |gamma| / alpha0: w^5 - b w + c = 0 with |c| = 1
  const double s = std::pow(-params.gamma / params.alpha0, 0.2);
  const cdouble b = params.beta0 / (params.alpha0 * std::pow(s, 4));
  const cdouble c = params.gamma / (params.alpha0 * std::pow(s, 5));
  Eigen::Matrix<cdouble, 5, 5> comp = Eigen::Matrix<cdouble, 5, 5>::Zero();
  for (int i = 1; i < 5; ++i) comp(i, i - 1) = 1.0;
  // monic w^5 + 0 w^4 + 0 w^3 + 0 w^2 - b w + c
  comp(0, 4) = -c;
  comp(1, 4) = b;
  Eigen::ComplexEigenSolver<Eigen::Matrix<cdouble, 5, 5>> es(comp, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("dispersion: eigenvalue solver failed");

  DispersionData d;
  d.params = params;
  std::array<cdouble, 5> r;
  for (int i = 0; i < 5; ++i) r[i] = newton_polish(params, s * es.eigenvalues()(i));

  double rmax = 0.0, gap = INFINITY;
  for (int i = 0; i < 5; ++i) {
    rmax = std::max(rmax, std::abs(r[i]));
    for (int j = 0; j < i; ++j) gap = std::min(gap, std::abs(r[i] - r[j]));
  }
  if (gap < kRepeatedRootTolerance * rmax) throw std::domain_error("dispersion: repeated roots unsupported");

  if (params.beta0.imag() == 0.0) {
    // exactly one positive real root (one sign change in the coefficients)
    int best = 0;
    double best_score = INFINITY;
    for (int i = 0; i < 5; ++i) {
      if (r[i].real() <= 0.0) continue;
      double score = std::abs(r[i].imag()) / std::abs(r[i]);
      if (score < best_score) {
        best_score = score;
        best = i;
      }
    }
    std::swap(r[0], r[best]);
    r[0] = newton_polish_real(params, r[0].real());
    d.radiating_index = 0;
  }
  std::sort(r.begin() + (d.radiating_index == 0 ? 1 : 0), r.end(),
            [](cdouble a, cdouble b) { return std::arg(a) < std::arg(b); });
  for (int i = 0; i < 5; ++i) {
    d.roots[i] = r[i];
    d.residues[i] = 1.0 / dpoly(params, r[i]);
  }
  return d;
}

cdouble moment(const DispersionData& d, int q) {
  cdouble acc = 0.0;
  for (int j = 0; j < 5; ++j) acc += d.residues[j] * std::pow(d.roots[j], q);
  return acc;
}

}  // namespace flexscat
