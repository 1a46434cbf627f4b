#pragma once

#include <array>
#include <complex>

namespace flexscat {

using cdouble = std::complex<double>;

// Background constants of p(z) = alpha0 z^5 - beta0 z + gamma.
struct PhysicalParams {
  double alpha0 = 1.0;
  cdouble beta0 = 0.0;
  double gamma = -1.0;
  double nu = 0.33;
};

// Material constants; defaults are the usual sea-ice values.
struct IcePreset {
  double youngs_modulus = 7e9;  // Pa
  double poisson = 0.33;
  double rho_ice = 917.0;   // kg/m^3
  double rho_sea = 1025.0;  // kg/m^3
  double g = 9.8;           // m/s^2
  double omega = 1.0;       // rad/s
};

enum class Regime { radiating, dissipative };

struct DispersionData {
  PhysicalParams params;
  // roots[0] is the radiating (positive real) root when Im beta0 == 0
  std::array<cdouble, 5> roots{};
  std::array<cdouble, 5> residues{};
  int radiating_index = -1;

  Regime regime() const { return radiating_index >= 0 ? Regime::radiating : Regime::dissipative; }
  // k = rho_1 for the radiating regime
  double wavenumber() const;
};

double flexural_rigidity(const IcePreset& ice, double thickness);
cdouble beta_coefficient(const IcePreset& ice, double thickness);

PhysicalParams derive_params(const IcePreset& ice, double thickness);

// Frequency for which k is the radiating root at the given background thickness.
double omega_for_wavenumber(const IcePreset& ice, double thickness, double k);

// Throws std::invalid_argument for inadmissible params and std::domain_error
// when two roots nearly coincide.
DispersionData solve_dispersion(const PhysicalParams& params);

// sum_j e_j rho_j^q
cdouble moment(const DispersionData& d, int q);

inline constexpr double kRepeatedRootTolerance = 1e-6;

}  // namespace flexscat
