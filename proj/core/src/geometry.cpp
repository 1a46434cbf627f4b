#include "flexscat/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "flexscat/gauss_legendre.hpp"

namespace flexscat {
namespace {

constexpr double kTruncate = 1e-14;
constexpr double kTail = 9.0;  // Gaussians are dropped beyond kTail sigma (e^-40.5)
constexpr int kCurveNodes = 10;

template <class... T>
struct overloaded : T... {
  using T::operator()...;
};
template <class... T>
overloaded(T...) -> overloaded<T...>;

double draft_factor(const IcePreset& ice) { return ice.rho_sea / (ice.rho_sea - ice.rho_ice); }

// erf(s(x - x0)) + erf(s(x1 - x)) without cancellation in the tails, with two derivatives
std::array<double, 3> erf_window(double x, double x0, double x1, double s) {
  const double a = s * (x - x0), b = s * (x1 - x);
  double v;
  if (a < 0.0)
    v = std::erfc(-a) - std::erfc(b);
  else if (b < 0.0)
    v = std::erfc(-b) - std::erfc(a);
  else
    v = std::erf(a) + std::erf(b);
  const double c = 2.0 * s / std::sqrt(std::numbers::pi);
  const double ea = std::exp(-a * a), eb = std::exp(-b * b);
  return {v, c * (ea - eb), c * (-2.0 * s * a * ea - 2.0 * s * b * eb)};
}

void add_gaussian(ThicknessSample& out, double amp, double dx, double dy, double sigma) {
  const double s2 = sigma * sigma;
  const double g = amp * std::exp(-(dx * dx + dy * dy) / (2.0 * s2));
  out.H += g;
  out.Hx -= dx / s2 * g;
  out.Hy -= dy / s2 * g;
  out.Hxx += (dx * dx / s2 - 1.0) / s2 * g;
  out.Hyy += (dy * dy / s2 - 1.0) / s2 * g;
  out.Hxy += dx * dy / (s2 * s2) * g;
}

ThicknessSample convolve(const std::vector<Point2>& nodes, const std::vector<double>& w, double sigma, double x,
                         double y) {
  ThicknessSample out;
  const double cut = kTail * sigma;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const double dx = x - nodes[n][0], dy = y - nodes[n][1];
    if (std::abs(dx) > cut || std::abs(dy) > cut) continue;
    add_gaussian(out, w[n], dx, dy, sigma);
  }
  return out;
}

}  // namespace

std::string profile_kind(const ThicknessProfile& p) {
  return std::visit(overloaded{[](const ConstantProfile&) { return "constant"; },
                               [](const GaussianBump&) { return "gaussian_bump"; },
                               [](const Rolls&) { return "rolls"; },
                               [](const RandomMedium&) { return "random_medium"; },
                               [](const RidgeCurves&) { return "ridges"; },
                               [](const Spiral&) { return "spiral"; }},
                    p);
}

double background_thickness(const ThicknessProfile& p, const IcePreset& ice) {
  return std::visit(overloaded{[](const ConstantProfile& c) { return c.thickness; },
                               [](const GaussianBump& g) { return g.background; },
                               [&](const Rolls& r) { return draft_factor(ice) * r.freeboard; },
                               [](const RandomMedium& m) { return m.mean; },
                               [](const RidgeCurves& c) { return c.background; },
                               [](const Spiral& s) { return s.H0; }},
                    p);
}

ThicknessEvaluator::ThicknessEvaluator(const ThicknessProfile& p, const IcePreset& ice)
    : profile_(p), ice_(ice), background_(background_thickness(p, ice)) {
  if (!(background_ > 0.0)) throw std::invalid_argument("thickness profile: background thickness must be positive");
  std::visit(overloaded{[&](const ConstantProfile&) { length_ = 1.0; },
                        [&](const GaussianBump& g) {
                          if (!(g.sigma > 0.0)) throw std::invalid_argument("gaussian_bump: sigma must be positive");
                          length_ = g.sigma;
                        },
                        [&](const Rolls& r) {
                          if (!(r.taper > 0.0) || !(r.width > 0.0) || !(r.x1 > r.x0) || !(r.y1 > r.y0))
                            throw std::invalid_argument("rolls: invalid taper, width or box");
                          length_ = std::min(1.0 / r.taper, r.width / (2.0 * std::numbers::pi));
                        },
                        [&](const RandomMedium& m) {
                          if (!(m.sigma > 0.0) || !(m.spacing > 0.0) || !(m.half_extent >= 0.0) || m.amp_hi < m.amp_lo)
                            throw std::invalid_argument("random_medium: invalid parameters");
                          length_ = m.sigma;
                          cell_ = m.spacing;
                          cells_ = int(std::floor(2.0 * m.half_extent / m.spacing + 1e-9)) + 1;
                          std::mt19937_64 rng(m.seed);
                          amps_.resize(std::size_t(cells_) * cells_);
                          for (double& a : amps_) {
                            const double u = double(rng() >> 11) * 0x1.0p-53;
                            a = m.amp_lo + (m.amp_hi - m.amp_lo) * u;
                          }
                        },
                        [&](const RidgeCurves& c) {
                          if (!(c.sigma > 0.0)) throw std::invalid_argument("ridges: sigma must be positive");
                          length_ = c.sigma;
                          amplitude_ = c.amplitude;
                        },
                        [&](const Spiral& s) {
                          if (!(s.sigma > 0.0) || !(s.a > 0.0) || !(s.t1 > s.t0))
                            throw std::invalid_argument("spiral: invalid parameters");
                          length_ = s.sigma;
                          amplitude_ = s.amplitude;
                        }},
             profile_);
  if (std::holds_alternative<RidgeCurves>(profile_) || std::holds_alternative<Spiral>(profile_)) {
    // refine until doubling the panel density changes the convolution by < 1e-10 of its peak
    const double sigma = length_;
    const double peak = sigma * std::sqrt(2.0 * std::numbers::pi);
    for (int k = 2; k <= 64; k *= 2) {
      discretise_curves(2 * k);
      const std::vector<Point2> fine_nodes = nodes_;
      const std::vector<double> fine_w = weights_;
      discretise_curves(k);
      std::vector<Point2> probes;
      const std::size_t step = std::max<std::size_t>(1, nodes_.size() / 97);
      for (std::size_t i = 0; i < nodes_.size(); i += step)
        probes.push_back({nodes_[i][0] + sigma / 3.0, nodes_[i][1] - sigma / 4.0});
      double diff = 0.0;
      for (const Point2& q : probes) {
        const double coarse = convolve(nodes_, weights_, sigma, q[0], q[1]).H;
        const double fine = convolve(fine_nodes, fine_w, sigma, q[0], q[1]).H;
        diff = std::max(diff, std::abs(fine - coarse));
      }
      if (diff <= 1e-10 * peak) return;
    }
    throw std::runtime_error("curve convolution: quadrature did not reach 1e-10 accuracy");
  }
}

void ThicknessEvaluator::discretise_curves(int panels_per_sigma) {
  nodes_.clear();
  weights_.clear();
  const GaussRule g = gauss_legendre(kCurveNodes);
  const double sigma = length_;
  if (const auto* c = std::get_if<RidgeCurves>(&profile_)) {
    for (const auto& poly : c->curves)
      for (std::size_t s = 0; s + 1 < poly.size(); ++s) {
        const Point2 p = poly[s], q = poly[s + 1];
        const double len = std::hypot(q[0] - p[0], q[1] - p[1]);
        if (len == 0.0) continue;
        const int panels = std::max(1, int(std::ceil(len * panels_per_sigma / sigma)));
        for (int k = 0; k < panels; ++k)
          for (int i = 0; i < kCurveNodes; ++i) {
            const double t = (k + 0.5 * (g.x[i] + 1.0)) / panels;
            nodes_.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
            weights_.push_back(0.5 * g.w[i] * len / panels);
          }
      }
  } else if (const auto* s = std::get_if<Spiral>(&profile_)) {
    auto speed = [&](double t) { return s->a * t * t * std::sqrt(9.0 + t * t); };
    const double vmax = std::max(speed(s->t0), speed(s->t1));
    const int panels = std::max(1, int(std::ceil((s->t1 - s->t0) * vmax * panels_per_sigma / sigma)));
    const double dt = (s->t1 - s->t0) / panels;
    for (int k = 0; k < panels; ++k)
      for (int i = 0; i < kCurveNodes; ++i) {
        const double t = s->t0 + dt * (k + 0.5 * (g.x[i] + 1.0));
        const double r = s->a * t * t * t;
        nodes_.push_back({-r * std::cos(t), r * std::sin(t)});
        weights_.push_back(0.5 * g.w[i] * dt * speed(t));
      }
  }
}

ThicknessSample ThicknessEvaluator::curve_kernel(double x, double y) const {
  return convolve(nodes_, weights_, length_, x, y);
}

ThicknessSample ThicknessEvaluator::operator()(double x, double y) const {
  ThicknessSample out;
  std::visit(
      overloaded{[&](const ConstantProfile& c) { out.H = c.thickness; },
                 [&](const GaussianBump& g) {
                   add_gaussian(out, g.amplitude, x - g.cx, y - g.cy, g.sigma);
                   out.H += g.background;
                 },
                 [&](const Rolls& r) {
                   const double c = draft_factor(ice_);
                   const double kw = 2.0 * std::numbers::pi / r.width;
                   const double f = 0.5 * r.amplitude * (1.0 + std::sin(kw * x));
                   const double f1 = 0.5 * r.amplitude * kw * std::cos(kw * x);
                   const double f2 = -0.5 * r.amplitude * kw * kw * std::sin(kw * x);
                   const auto ex = erf_window(x, r.x0, r.x1, r.taper);
                   const auto ey = erf_window(y, r.y0, r.y1, r.taper);
                   const double psi = 0.25 * ex[0] * ey[0];
                   const double px = 0.25 * ex[1] * ey[0], py = 0.25 * ex[0] * ey[1];
                   const double pxx = 0.25 * ex[2] * ey[0], pyy = 0.25 * ex[0] * ey[2], pxy = 0.25 * ex[1] * ey[1];
                   out.H = c * (f * psi + r.freeboard);
                   out.Hx = c * (f1 * psi + f * px);
                   out.Hy = c * f * py;
                   out.Hxx = c * (f2 * psi + 2.0 * f1 * px + f * pxx);
                   out.Hxy = c * (f1 * py + f * pxy);
                   out.Hyy = c * f * pyy;
                 },
                 [&](const RandomMedium& m) {
                   const double cut = kTail * m.sigma;
                   const double e = -m.half_extent;
                   const int i0 = std::max(0, int(std::ceil((x - cut - e) / cell_)));
                   const int i1 = std::min(cells_ - 1, int(std::floor((x + cut - e) / cell_)));
                   const int j0 = std::max(0, int(std::ceil((y - cut - e) / cell_)));
                   const int j1 = std::min(cells_ - 1, int(std::floor((y + cut - e) / cell_)));
                   for (int j = j0; j <= j1; ++j)
                     for (int i = i0; i <= i1; ++i)
                       add_gaussian(out, amps_[std::size_t(j) * cells_ + i], x - (e + i * cell_), y - (e + j * cell_),
                                    m.sigma);
                   out.H += m.mean;
                 },
                 [&](const RidgeCurves& c) {
                   out = curve_kernel(x, y);
                   out.H *= amplitude_, out.Hx *= amplitude_, out.Hy *= amplitude_;
                   out.Hxx *= amplitude_, out.Hxy *= amplitude_, out.Hyy *= amplitude_;
                   out.H += c.background;
                 },
                 [&](const Spiral& s) {
                   out = curve_kernel(x, y);
                   out.H *= amplitude_, out.Hx *= amplitude_, out.Hy *= amplitude_;
                   out.Hxx *= amplitude_, out.Hxy *= amplitude_, out.Hyy *= amplitude_;
                   out.H += s.H0;
                 }},
      profile_);
  return out;
}

bool CoefficientField::perturbed(std::size_t i) const {
  return alpha_c[i] != 0.0 || beta_c[i] != 0.0 || ax[i] != 0.0 || ay[i] != 0.0 || axx[i] != 0.0 ||
         axy[i] != 0.0 || ayy[i] != 0.0;
}

double CoefficientField::min_thickness() const { return *std::min_element(H.begin(), H.end()); }

double spiral_calibrated_amplitude(const Spiral& s, const IcePreset& ice, const Grid& grid) {
  Spiral unit = s;
  unit.amplitude = 1.0;
  ThicknessEvaluator ev(unit, ice);
  double cmax = 0.0;
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c) cmax = std::max(cmax, ev.curve_kernel(grid.x(c), grid.y(r)).H);
  if (cmax == 0.0) throw std::domain_error("spiral: curve does not touch the grid, cannot calibrate");
  return (s.calibrate_min - s.H0) / cmax;
}

CoefficientField build_field(const ThicknessProfile& p, const IcePreset& ice, const Grid& grid) {
  ThicknessProfile prof = p;
  if (auto* s = std::get_if<Spiral>(&prof); s && s->calibrate_min > 0.0)
    s->amplitude = spiral_calibrated_amplitude(*s, ice, grid);
  const ThicknessEvaluator ev(prof, ice);
  const double hb = ev.background();
  const double ell = ev.length_scale();
  const PhysicalParams bg = derive_params(ice, hb);
  const double kappa = ice.youngs_modulus / (12.0 * (1.0 - ice.poisson * ice.poisson));
  const double w2 = ice.omega * ice.omega;

  CoefficientField f;
  f.grid = grid;
  f.alpha0 = bg.alpha0;
  f.beta0 = bg.beta0;
  f.gamma = bg.gamma;
  f.nu = bg.nu;
  f.background = hb;
  const std::size_t n = grid.size();
  f.H.resize(n);
  f.alpha.resize(n), f.alpha_c.resize(n), f.beta.resize(n), f.beta_c.resize(n);
  f.ax.resize(n), f.ay.resize(n), f.axx.resize(n), f.axy.resize(n), f.ayy.resize(n), f.lap.resize(n);
  for (int r = 0; r < grid.rows(); ++r)
    for (int c = 0; c < grid.cols(); ++c) {
      const std::size_t i = grid.index(c, r);
      ThicknessSample t = ev(grid.x(c), grid.y(r));
      const double tol = kTruncate * hb;
      if (std::abs(t.H - hb) <= tol && std::abs(t.Hx) * ell <= tol && std::abs(t.Hy) * ell <= tol &&
          std::abs(t.Hxx) * ell * ell <= tol && std::abs(t.Hxy) * ell * ell <= tol &&
          std::abs(t.Hyy) * ell * ell <= tol)
        t = ThicknessSample{hb, 0, 0, 0, 0, 0};
      if (!(t.H > 0.0)) throw std::domain_error("build_field: thickness must be positive everywhere");
      const double H = t.H, H2 = H * H;
      f.H[i] = H;
      f.alpha[i] = flexural_rigidity(ice, H);
      f.alpha_c[i] = t.H == hb ? 0.0 : f.alpha[i] - f.alpha0;
      f.ax[i] = 3.0 * kappa * H2 * t.Hx;
      f.ay[i] = 3.0 * kappa * H2 * t.Hy;
      f.axx[i] = kappa * (6.0 * H * t.Hx * t.Hx + 3.0 * H2 * t.Hxx);
      f.axy[i] = kappa * (6.0 * H * t.Hx * t.Hy + 3.0 * H2 * t.Hxy);
      f.ayy[i] = kappa * (6.0 * H * t.Hy * t.Hy + 3.0 * H2 * t.Hyy);
      f.lap[i] = f.axx[i] + f.ayy[i];
      f.beta_c[i] = ice.rho_ice * w2 * (H - hb);
      f.beta[i] = f.beta0 + f.beta_c[i];
      if (f.perturbed(i)) {
        if (f.c_hi < f.c_lo) {
          f.c_lo = f.c_hi = c;
          f.r_lo = f.r_hi = r;
        }
        f.c_lo = std::min(f.c_lo, c), f.c_hi = std::max(f.c_hi, c);
        f.r_lo = std::min(f.r_lo, r), f.r_hi = std::max(f.r_hi, r);
      }
    }
  return f;
}

RidgeCurves default_ridges() {
  RidgeCurves c;
  c.background = 1.0;
  c.sigma = 5.0;
  // 3 m ridges over a 1 m background
  c.amplitude = 2.0 / (c.sigma * std::sqrt(2.0 * std::numbers::pi));
  c.curves = {{{-250.0, -60.0}, {-120.0, -20.0}, {0.0, 0.0}},
              {{0.0, 0.0}, {120.0, 90.0}, {250.0, 140.0}},
              {{0.0, 0.0}, {110.0, -70.0}, {250.0, -90.0}},
              {{120.0, 90.0}, {150.0, 230.0}}};
  return c;
}

}  // namespace flexscat
