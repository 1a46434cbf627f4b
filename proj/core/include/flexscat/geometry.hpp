#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "flexscat/dispersion.hpp"
#include "flexscat/grid.hpp"

namespace flexscat {

struct ConstantProfile {
  double thickness = 1.0;
};

// H = background + amplitude exp(-|r - c|^2 / (2 sigma^2))
struct GaussianBump {
  double background = 1.0;
  double amplitude = 2.0;
  double sigma = 4.0;
  double cx = 0.0, cy = 0.0;
};

// H = rho_sea / (rho_sea - rho_ice) [(A/2 + A/2 sin(2 pi x / w)) psi + H_f],
// psi = (1/4)(erf(s(x - x0)) + erf(s(x1 - x)))(erf(s(y - y0)) + erf(s(y1 - y)))
struct Rolls {
  double amplitude = 0.75;
  double width = 333.3;
  double freeboard = 0.35;
  double taper = 0.008;
  double x0 = -1000.0, x1 = 1000.0, y0 = -1000.0, y1 = 1000.0;
};

// mean + sum_k a_k exp(-|r - c_k|^2 / (2 sigma^2)), centres on a square lattice
// of the given spacing covering [-half_extent, half_extent]^2, a_k ~ U[amp_lo, amp_hi].
struct RandomMedium {
  double mean = 5.0;
  double amp_lo = -1.0, amp_hi = 1.0;
  double sigma = 75.0;
  double spacing = 75.0;
  double half_extent = 6000.0;
  std::uint64_t seed = 1;
};

using Point2 = std::array<double, 2>;

// background + amplitude * (Gaussian kernel convolved with arc length on polylines)
struct RidgeCurves {
  double background = 1.0;
  double amplitude = 0.0;  // per unit length; a straight ridge peaks at amplitude sigma sqrt(2 pi)
  double sigma = 5.0;
  std::vector<std::vector<Point2>> curves;
};

// H0 + A int_{t0}^{t1} exp(-|r - r_s(t)|^2 / (2 sigma^2)) |r_s'(t)| dt,
// r_s(t) = (-a t^3 cos t, a t^3 sin t). If calibrate_min > 0, A is chosen so that
// the minimum of H over the build grid equals calibrate_min.
struct Spiral {
  double H0 = 1.0;
  double a = 1e-4;
  double t0 = 5.0 * 3.14159265358979323846, t1 = 11.0 * 3.14159265358979323846;
  double sigma = 0.15;
  double amplitude = 0.0;
  double calibrate_min = 0.35;
};

using ThicknessProfile = std::variant<ConstantProfile, GaussianBump, Rolls, RandomMedium, RidgeCurves, Spiral>;

std::string profile_kind(const ThicknessProfile& p);
double background_thickness(const ThicknessProfile& p, const IcePreset& ice);

// Thickness and its first and second derivatives at one point.
struct ThicknessSample {
  double H = 0.0, Hx = 0.0, Hy = 0.0, Hxx = 0.0, Hxy = 0.0, Hyy = 0.0;
};

// Pointwise evaluator. Curve profiles are discretised once on construction;
// for an uncalibrated spiral amplitude is used as given.
class ThicknessEvaluator {
 public:
  ThicknessEvaluator(const ThicknessProfile& p, const IcePreset& ice);
  ThicknessSample operator()(double x, double y) const;
  double background() const { return background_; }
  // length over which the perturbation varies, for truncation thresholds
  double length_scale() const { return length_; }
  void set_curve_amplitude(double a) { amplitude_ = a; }
  double curve_amplitude() const { return amplitude_; }
  // unit-amplitude curve convolution at (x, y)
  ThicknessSample curve_kernel(double x, double y) const;
  std::size_t curve_nodes() const { return nodes_.size(); }

 private:
  ThicknessProfile profile_;
  IcePreset ice_;
  double background_ = 1.0;
  double length_ = 1.0;
  double amplitude_ = 0.0;
  std::vector<Point2> nodes_;
  std::vector<double> weights_;
  std::vector<Point2> centres_;
  std::vector<double> amps_;
  double cell_ = 0.0;
  int cells_ = 0;
  void discretise_curves(int panels_per_sigma);
};

struct CoefficientField {
  Grid grid;
  double alpha0 = 0.0;
  cdouble beta0 = 0.0;
  double gamma = 0.0;
  double nu = 0.33;
  double background = 1.0;
  std::vector<double> H;
  std::vector<double> alpha, alpha_c;
  std::vector<cdouble> beta, beta_c;
  std::vector<double> ax, ay, axx, axy, ayy, lap;
  // bounding box (cols, rows) of nodes with any nonzero perturbation; empty if none
  int c_lo = 0, c_hi = -1, r_lo = 0, r_hi = -1;

  PhysicalParams params() const { return {alpha0, beta0, gamma, nu}; }
  bool perturbed(std::size_t i) const;
  double min_thickness() const;
};

// Coefficients on the grid, with alpha0 and beta0 taken at the background
// thickness. Perturbations below 1e-14 relative are set to exactly zero.
// Throws std::domain_error if H <= 0 anywhere.
CoefficientField build_field(const ThicknessProfile& p, const IcePreset& ice, const Grid& grid);

// Calibrated spiral amplitude for this grid (negative for a groove).
double spiral_calibrated_amplitude(const Spiral& s, const IcePreset& ice, const Grid& grid);

// Default ridge network for the preset.
RidgeCurves default_ridges();

}  // namespace flexscat
