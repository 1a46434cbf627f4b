#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "flexscat/geometry.hpp"
#include "flexscat/greens.hpp"
#include "flexscat/quadrature.hpp"

namespace flexscat {

struct Incident {
  enum class Kind { plane_wave, point_source };
  Kind kind = Kind::plane_wave;
  double k = 0.0;          // plane wave wavenumber; 0 selects rho_1
  double direction = 0.0;  // radians from the +x axis
  double sx = 0.0, sy = 0.0;
};

// Incident traces phi^inc and d/dz phi^inc on z = 0.
struct IncidentTrace {
  cdouble phi = 0.0, dz = 0.0;
};
IncidentTrace incident_trace(const Incident& inc, const DispersionData& d, double x, double y);
double incident_wavenumber(const Incident& inc, const DispersionData& d);
// Message when a plane wave does not solve the background problem.
std::optional<std::string> check_incident(const Incident& inc, const DispersionData& d);

// Smallest n' >= n of the form 2^a 3^b 5^c 7^d.
int good_fft_size(int n);

// Sub-grid of g covering columns c_lo..c_hi and rows r_lo..r_hi, grown by one
// node where needed to make the counts odd.
Grid sub_grid(const Grid& g, int c_lo, int c_hi, int r_lo, int r_hi);
CoefficientField restrict_field(const CoefficientField& f, const Grid& sub);
// Restriction to the support bounding box plus margin nodes.
CoefficientField restrict_to_support(const CoefficientField& f, int margin = 0);

// Corrected discrete convolution t(x_i) = sum_j A_k(i - j) mu(x_j) from a source
// grid to a lattice-aligned target grid, where A_k(o) = h^2 w_k(h o) for o != 0
// plus the correction weight at o. Computed by zero-padded FFT.
class GridConvolver {
 public:
  GridConvolver(const DispersionData& d, const CorrectionTable& t, const Grid& source, const Grid& target,
                std::vector<int> kernels);
  ~GridConvolver();
  GridConvolver(const GridConvolver&) = delete;
  GridConvolver& operator=(const GridConvolver&) = delete;

  const Grid& source() const { return src_; }
  const Grid& target() const { return tgt_; }
  const std::vector<int>& kernels() const { return kernels_; }
  // one output per kernel, in the order given on construction
  std::vector<std::vector<cdouble>> apply(const std::vector<cdouble>& mu) const;
  std::vector<cdouble> apply_one(int kernel, const std::vector<cdouble>& mu) const;

 private:
  Grid src_, tgt_;
  std::vector<int> kernels_;
  int nx_ = 0, ny_ = 0;
  int dc_ = 0, dr_ = 0;
  std::vector<std::vector<cdouble>> spectra_;
  void* fwd_ = nullptr;
  void* bwd_ = nullptr;
  std::vector<std::vector<cdouble>> convolve(const std::vector<cdouble>& mu,
                                             const std::vector<std::size_t>& which) const;
  void forward(std::vector<cdouble>& buf) const;
  void backward(std::vector<cdouble>& buf) const;
};

// Kernel arrays A_k(o) for |o_x| <= ox, |o_y| <= oy, row-major over (o_y, o_x).
std::array<std::vector<cdouble>, kNumKernels> kernel_arrays(const DispersionData& d, const CorrectionTable& t,
                                                             int ox, int oy, const std::vector<int>& kernels);

// Discretised (alpha/alpha0) mu + 1/2 sum_k b_k (A_k * mu) on the field grid.
class LsOperator {
 public:
  LsOperator(const CoefficientField& field, const DispersionData& d, const CorrectionTable& t);

  const Grid& grid() const { return field_.grid; }
  const CoefficientField& field() const { return field_; }
  std::size_t size() const { return field_.grid.size(); }

  std::vector<cdouble> apply(const std::vector<cdouble>& mu) const;
  DensityGrid apply(const DensityGrid& mu) const;
  // b_k (A_k * mu) for one kernel, without the 1/2
  std::vector<cdouble> kernel_term(int kernel, const std::vector<cdouble>& mu) const;
  // multiplier b_k at node i
  cdouble coefficient(int kernel, std::size_t i) const { return coef_[kernel][i]; }

 private:
  CoefficientField field_;
  std::array<std::vector<cdouble>, kNumKernels> coef_;
  std::vector<double> diag_;
  GridConvolver conv_;
};

DensityGrid build_rhs(const Incident& inc, const CoefficientField& field, const DispersionData& d);

// sigma = corrected convolution of G_S with mu, on mu's grid.
DensityGrid compute_sigma(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t);

}  // namespace flexscat
