#pragma once

#include <array>
#include <string>
#include <vector>

#include "flexscat/greens.hpp"
#include "flexscat/grid.hpp"

namespace flexscat {

// Homogeneous singular kernels x^a y^b r^sigma (log r)^lambda that the
// operator kernels decompose into near the origin.
enum class Canonical {
  log,       // log r
  r2log,     // r^2 log r
  r4log,     // r^4 log r
  r3,        // r^3
  x_r2,      // x / r^2
  y_r2,
  xx_r2,     // x^2 / r^2
  yy_r2,
  xy_r2,
  x_r2log,   // x r^2 log r
  y_r2log,
  xx_r2log,  // x^2 r^2 log r
  yy_r2log,
};
inline constexpr int kNumCanonical = 13;

struct CanonicalShape {
  int a, b, sigma, lambda;
  bool swap_symmetric;
  int degree() const { return a + b + sigma; }
};
CanonicalShape canonical_shape(Canonical k);
const char* canonical_name(Canonical k);

// Z = int T(u) u^m phi(u) du - sum_{i != 0} T(i) i^m phi(i) at unit spacing for
// T = x^a y^b r^sigma log^lambda r and m = (p, q); independent of the cutoff phi.
double zeta_moment(int a, int b, int sigma, int lambda, int p, int q);

struct Offset {
  int i = 0, j = 0;
  bool operator==(const Offset&) const = default;
};

// Unit-spacing correction weights for one canonical kernel. At spacing h the
// weights scale by h^(degree + 2); log r additionally picks up h^2 log h at (0,0).
struct StencilWeights {
  std::vector<Offset> offsets;
  std::vector<double> weights;
  double residual = 0.0;
  int radius = 0;
};
const StencilWeights& canonical_weights(Canonical k, int order = 6);

// Operator kernels w_1..w_8 (index 0..7):
//   d_x Lap G_S, d_y Lap G_S, Lap G_S, d_yy G_S, d_xx G_S, d_xy G_S, G_S, G_phi
inline constexpr int kNumKernels = 8;
cdouble kernel_value(int kernel, const GreensEval& g);
const char* kernel_name(int kernel);

struct CorrectionTable {
  double h = 0.0;
  int order = 6;
  std::vector<Offset> stencil;
  std::array<std::vector<cdouble>, kNumKernels> weights;  // aligned with stencil

  cdouble weight(int kernel, Offset o) const;
  double stability_sum(int kernel) const;
};

CorrectionTable build_corrections(const DispersionData& d, double h, int order = 6);

// Versioned binary I/O; load returns false on a missing or mismatched file.
void save_corrections(const CorrectionTable& t, const DispersionData& d, const std::string& path);
bool load_corrections(CorrectionTable& t, const DispersionData& d, double h, int order, const std::string& path);

// build_corrections through the on-disk cache in $FLEXSCAT_CACHE_DIR (if set).
CorrectionTable cached_corrections(const DispersionData& d, double h, int order = 6);

// Punctured trapezoid plus local corrections, evaluated by direct summation at
// one target node; density outside the grid is zero.
cdouble apply_corrected_rule(const CorrectionTable& t, int kernel, const DispersionData& d,
                             const DensityGrid& mu, int col, int row);

}  // namespace flexscat
