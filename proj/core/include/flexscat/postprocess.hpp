#pragma once

#include <string>
#include <vector>

#include "flexscat/solver.hpp"

namespace flexscat {

struct FieldBundle {
  Grid grid;
  std::vector<cdouble> phi, dz_phi;          // total traces
  std::vector<cdouble> phi_scat, dz_scat;    // G_phi * mu and 1/2 G_S * mu
};

// Fields on a target grid aligned with the density lattice.
FieldBundle reconstruct_fields(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t,
                               const Incident& inc, const Grid& target);

// Scattered traces at arbitrary points by direct summation; points within the
// correction stencil of a density node must be lattice nodes.
struct PointFields {
  cdouble phi_scat = 0.0, dz_scat = 0.0;
};
std::vector<PointFields> evaluate_points(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t,
                                         const std::vector<Point2>& points);

// Zero-extension of data onto a larger lattice-aligned grid.
DensityGrid embed(const DensityGrid& data, const Grid& target);

// Trigonometric interpolation by zero-padding the spectrum. The output has
// spacing h / factor and spans the same nodes as the input.
DensityGrid fft_interpolate(const DensityGrid& data, int factor);

// Centred finite-difference weights for the m-th derivative on offsets -w..w
// (Fornberg's recursion).
std::vector<double> fd_weights(int derivative, int half_width);

struct ResidualReport {
  double rel_l2 = 0.0, rel_linf = 0.0;
  std::size_t samples = 0;
};

// Residual of the plate boundary condition
//   alpha Lap^2 w + 2 grad alpha . grad Lap w + Lap alpha Lap w
//   + (1 - nu)(2 a_xy w_xy - a_xx w_yy - a_yy w_xx) - beta w + gamma phi,   w = dz phi,
// at the given lattice nodes by 8th-order centred differences on the bundle grid,
// relative to the largest term in the condition.
ResidualReport pde_residual(const FieldBundle& b, const CoefficientField& field, const std::vector<Point2>& samples);

// {(m/2, n/2) : -8 <= m, n <= 8}
std::vector<Point2> default_residual_samples();

struct ProbeRow {
  double k = 0.0;
  double reflected_abs = 0.0, transmitted_abs = 0.0;
  int iterations = 0;
  bool converged = true;
};

// For each k: omega from the background dispersion, a plane wave along the
// incidence direction, |phi_scat| at the upstream probe and |phi| at the downstream probe.
std::vector<ProbeRow> probe_sweep(const ScatterProblem& base, const std::vector<double>& ks, Point2 upstream,
                                  Point2 downstream, double kmin = 0.0, double kmax = 1e300);

// Binary grid files: "FXGR", u32 version, f64 h, i32 nx, i32 ny, f64 x0, f64 y0,
// u32 dtype (1 = complex128), then row-major little-endian values.
void write_grid(const DensityGrid& g, const std::string& path);
DensityGrid read_grid(const std::string& path);
void write_sweep_csv(const std::vector<ProbeRow>& rows, const std::string& path);

}  // namespace flexscat
