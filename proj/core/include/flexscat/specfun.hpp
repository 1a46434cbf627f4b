#pragma once

#include <array>
#include <complex>

namespace flexscat::specfun {

using cdouble = std::complex<double>;

enum class Branch { series, quadrature, integral, asymptotic, reflection };

struct SpecFunValue {
  cdouble value;
  Branch branch;
};

// |z| at which R_n and K_n switch from quadrature to the large-argument series.
inline constexpr double kStruveAsymptoticRadius = 95.0;
// |z| below which H^(1)_n is summed from the ascending J/Y series.
inline constexpr double kHankelSeriesRadius = 2.5;
// |z| above which H^(1)_n uses the Hankel asymptotic expansion.
inline constexpr double kHankelAsymptoticRadius = 25.0;
// |z| below which the log-cancelled combinations use their power series.
inline constexpr double kComboSeriesRadius = 4.0;

// R_n(z) = J_n(z) + i Struve H_n(z) for Im z >= 0; n in {0, 1, 2}.
SpecFunValue struve_R(int n, cdouble z);

// Struve K_n(z) = H_n(z) - Y_n(z) on the principal branch; n in {0, 1}. z != 0.
SpecFunValue struve_K(int n, cdouble z);

// Hankel H^(1)_n(z) for Im z >= 0, z != 0; n in {0, 1}.
SpecFunValue hankel1(int n, cdouble z);

// Bessel J_n for n in {0, 1} (ascending series; intended for moderate |z|).
cdouble bessel_j_series(int n, cdouble z);

enum class ComboKind {
  // n = 0: (i/4) H^(1)_0(z) + log(z) / (2 pi);  n = 1: (i/4) H^(1)_1(z) - 1/(2 pi z)
  hankel_log,
  // n = 0: K_0(z) + (2/pi) log(z);  n = 1: K_1(z) - 2/(pi z)
  struve_log,
};

// d^k/dz^k of the selected combination for k = 0..max_order (max_order <= 3).
// unused entries are zero. hankel_log requires Im z >= 0.
std::array<cdouble, 4> stable_combo_derivs(ComboKind kind, int n, cdouble z, int max_order);

cdouble stable_combo(ComboKind kind, int n, cdouble z, int derivative_order);

// Branch that stable_combo would use for this argument.
Branch stable_combo_branch(cdouble z);

}  // namespace flexscat::specfun
