#include "flexscat/operator.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "fftw_lock.hpp"

namespace flexscat {

std::mutex& detail::fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

namespace {

bool aligned(const Grid& a, const Grid& b, int& dc, int& dr) {
  if (a.h != b.h) return false;
  const double fx = (b.x(0) - a.x(0)) / a.h, fy = (b.y(0) - a.y(0)) / a.h;
  dc = int(std::lround(fx));
  dr = int(std::lround(fy));
  return std::abs(fx - dc) < 1e-9 && std::abs(fy - dr) < 1e-9;
}

}  // namespace

double incident_wavenumber(const Incident& inc, const DispersionData& d) {
  if (inc.k > 0.0) return inc.k;
  if (d.regime() != Regime::radiating) throw std::invalid_argument("plane wave: no real root in the dissipative regime");
  return d.wavenumber();
}

std::optional<std::string> check_incident(const Incident& inc, const DispersionData& d) {
  if (inc.kind != Incident::Kind::plane_wave || inc.k <= 0.0) return std::nullopt;
  if (d.regime() == Regime::radiating && std::abs(inc.k - d.wavenumber()) <= 1e-10 * d.wavenumber())
    return std::nullopt;
  std::ostringstream s;
  s << "plane wave k = " << inc.k << " is not the radiating root";
  if (d.regime() == Regime::radiating) s << " " << d.wavenumber();
  s << "; the incident field does not solve the background equation";
  return s.str();
}

IncidentTrace incident_trace(const Incident& inc, const DispersionData& d, double x, double y) {
  if (inc.kind == Incident::Kind::plane_wave) {
    const double k = incident_wavenumber(inc, d);
    const cdouble phi = std::exp(cdouble(0.0, k * (x * std::cos(inc.direction) + y * std::sin(inc.direction))));
    return {phi, k * phi};
  }
  const double r = std::hypot(x - inc.sx, y - inc.sy);
  if (r == 0.0) return {eval_Gphi_limit(d), 0.5 * eval_GS_limit(d)};
  return {eval_Gphi(d, r), 0.5 * eval_GS(d, r)};
}

int good_fft_size(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int k = m;
    for (int p : {2, 3, 5, 7})
      while (k % p == 0) k /= p;
    if (k == 1) return m;
  }
}

Grid sub_grid(const Grid& g, int c_lo, int c_hi, int r_lo, int r_hi) {
  if (c_hi < c_lo || r_hi < r_lo) throw std::invalid_argument("sub_grid: empty range");
  auto fix = [](int& lo, int& hi, int n) {
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    if ((hi - lo) % 2 == 1) {
      if (hi + 1 < n)
        ++hi;
      else if (lo > 0)
        --lo;
      else
        throw std::invalid_argument("sub_grid: cannot make an odd-sized range");
    }
  };
  fix(c_lo, c_hi, g.cols());
  fix(r_lo, r_hi, g.rows());
  Grid s;
  s.h = g.h;
  s.nx = (c_hi - c_lo) / 2 + 1;
  s.ny = (r_hi - r_lo) / 2 + 1;
  s.x0 = g.x((c_lo + c_hi) / 2);
  s.y0 = g.y((r_lo + r_hi) / 2);
  return s;
}

CoefficientField restrict_field(const CoefficientField& f, const Grid& sub) {
  int dc, dr;
  if (!aligned(f.grid, sub, dc, dr) || dc < 0 || dr < 0 || dc + sub.cols() > f.grid.cols() ||
      dr + sub.rows() > f.grid.rows())
    throw std::invalid_argument("restrict_field: sub-grid is not contained in the field grid");
  CoefficientField s;
  s.grid = sub;
  s.alpha0 = f.alpha0, s.beta0 = f.beta0, s.gamma = f.gamma, s.nu = f.nu, s.background = f.background;
  const std::size_t n = sub.size();
  for (auto* v : {&s.H, &s.alpha, &s.alpha_c, &s.ax, &s.ay, &s.axx, &s.axy, &s.ayy, &s.lap}) v->resize(n);
  s.beta.resize(n), s.beta_c.resize(n);
  for (int r = 0; r < sub.rows(); ++r)
    for (int c = 0; c < sub.cols(); ++c) {
      const std::size_t i = sub.index(c, r), j = f.grid.index(c + dc, r + dr);
      s.H[i] = f.H[j], s.alpha[i] = f.alpha[j], s.alpha_c[i] = f.alpha_c[j];
      s.beta[i] = f.beta[j], s.beta_c[i] = f.beta_c[j];
      s.ax[i] = f.ax[j], s.ay[i] = f.ay[j], s.axx[i] = f.axx[j], s.axy[i] = f.axy[j], s.ayy[i] = f.ayy[j];
      s.lap[i] = f.lap[j];
      if (s.perturbed(i)) {
        if (s.c_hi < s.c_lo) s.c_lo = s.c_hi = c, s.r_lo = s.r_hi = r;
        s.c_lo = std::min(s.c_lo, c), s.c_hi = std::max(s.c_hi, c);
        s.r_lo = std::min(s.r_lo, r), s.r_hi = std::max(s.r_hi, r);
      }
    }
  return s;
}

CoefficientField restrict_to_support(const CoefficientField& f, int margin) {
  if (f.c_hi < f.c_lo) throw std::invalid_argument("restrict_to_support: the field has no perturbation");
  return restrict_field(f, sub_grid(f.grid, f.c_lo - margin, f.c_hi + margin, f.r_lo - margin, f.r_hi + margin));
}

std::array<std::vector<cdouble>, kNumKernels> kernel_arrays(const DispersionData& d, const CorrectionTable& t,
                                                             int ox, int oy, const std::vector<int>& kernels) {
  const double h = t.h;
  const int m = std::max(ox, oy);
  // radial profiles on one octant 0 <= b <= a <= m
  std::vector<RadialGreens> rad(std::size_t(m + 1) * (m + 2) / 2);
  for (int a = 0; a <= m; ++a)
    for (int b = 0; b <= a; ++b)
      if (a > 0) rad[std::size_t(a) * (a + 1) / 2 + b] = eval_radial(d, h * std::hypot(double(a), double(b)));
  std::array<std::vector<cdouble>, kNumKernels> out;
  const int w = 2 * ox + 1;
  for (int k : kernels) out[k].assign(std::size_t(w) * (2 * oy + 1), 0.0);
  for (int j = -oy; j <= oy; ++j)
    for (int i = -ox; i <= ox; ++i) {
      const std::size_t at = std::size_t(j + oy) * w + (i + ox);
      if (i == 0 && j == 0) {
        for (int k : kernels) out[k][at] = t.weight(k, {0, 0});
        continue;
      }
      const int a = std::max(std::abs(i), std::abs(j)), b = std::min(std::abs(i), std::abs(j));
      const GreensEval g = assemble_derivatives(rad[std::size_t(a) * (a + 1) / 2 + b], h * i, h * j);
      for (int k : kernels) out[k][at] = h * h * kernel_value(k, g) + t.weight(k, {i, j});
    }
  return out;
}

GridConvolver::GridConvolver(const DispersionData& d, const CorrectionTable& t, const Grid& source,
                             const Grid& target, std::vector<int> kernels)
    : src_(source), tgt_(target), kernels_(std::move(kernels)) {
  if (std::abs(source.h - t.h) > 1e-14 * t.h) throw std::invalid_argument("GridConvolver: table spacing mismatch");
  if (!aligned(source, target, dc_, dr_)) throw std::invalid_argument("GridConvolver: grids are not lattice aligned");
  for (int k : kernels_)
    if (k < 0 || k >= kNumKernels) throw std::invalid_argument("GridConvolver: bad kernel id");
  const int sc = src_.cols(), sr = src_.rows(), tc = tgt_.cols(), tr = tgt_.rows();
  nx_ = good_fft_size(sc + tc - 1);
  ny_ = good_fft_size(sr + tr - 1);
  // offsets o = (target node) - (source node) range over [dc - sc + 1, dc + tc - 1]
  const int ox_lo = dc_ - sc + 1, ox_hi = dc_ + tc - 1, oy_lo = dr_ - sr + 1, oy_hi = dr_ + tr - 1;
  const int ox = std::max(std::abs(ox_lo), std::abs(ox_hi)), oy = std::max(std::abs(oy_lo), std::abs(oy_hi));
  const auto arrays = kernel_arrays(d, t, ox, oy, kernels_);
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    std::vector<cdouble> tmp(std::size_t(nx_) * ny_);
    auto* p = reinterpret_cast<fftw_complex*>(tmp.data());
    fwd_ = fftw_plan_dft_2d(ny_, nx_, p, p, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    bwd_ = fftw_plan_dft_2d(ny_, nx_, p, p, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  }
  const double scale = 1.0 / (double(nx_) * ny_);
  for (int k : kernels_) {
    std::vector<cdouble> buf(std::size_t(nx_) * ny_, 0.0);
    for (int q = 0; q <= oy_hi - oy_lo; ++q)
      for (int p = 0; p <= ox_hi - ox_lo; ++p)
        buf[std::size_t(q) * nx_ + p] =
            scale * arrays[k][std::size_t(q + oy_lo + oy) * (2 * ox + 1) + (p + ox_lo + ox)];
    forward(buf);
    spectra_.push_back(std::move(buf));
  }
}

GridConvolver::~GridConvolver() {
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  if (fwd_) fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  if (bwd_) fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
}

void GridConvolver::forward(std::vector<cdouble>& buf) const {
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(fwd_), p, p);
}

void GridConvolver::backward(std::vector<cdouble>& buf) const {
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(static_cast<fftw_plan>(bwd_), p, p);
}

std::vector<std::vector<cdouble>> GridConvolver::convolve(const std::vector<cdouble>& mu,
                                                          const std::vector<std::size_t>& which) const {
  if (mu.size() != src_.size()) throw std::invalid_argument("GridConvolver: density size mismatch");
  const int sc = src_.cols(), sr = src_.rows(), tc = tgt_.cols(), tr = tgt_.rows();
  std::vector<cdouble> spec(std::size_t(nx_) * ny_, 0.0);
  for (int r = 0; r < sr; ++r)
    for (int c = 0; c < sc; ++c) spec[std::size_t(r) * nx_ + c] = mu[src_.index(c, r)];
  forward(spec);
  std::vector<std::vector<cdouble>> out;
  std::vector<cdouble> buf(spec.size());
  for (std::size_t n : which) {
    const auto& a = spectra_[n];
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = spec[i] * a[i];
    backward(buf);
    std::vector<cdouble> o(tgt_.size());
    for (int r = 0; r < tr; ++r)
      for (int c = 0; c < tc; ++c) o[tgt_.index(c, r)] = buf[std::size_t(r + sr - 1) * nx_ + (c + sc - 1)];
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<std::vector<cdouble>> GridConvolver::apply(const std::vector<cdouble>& mu) const {
  std::vector<std::size_t> all(kernels_.size());
  for (std::size_t n = 0; n < all.size(); ++n) all[n] = n;
  return convolve(mu, all);
}

std::vector<cdouble> GridConvolver::apply_one(int kernel, const std::vector<cdouble>& mu) const {
  for (std::size_t n = 0; n < kernels_.size(); ++n)
    if (kernels_[n] == kernel) return std::move(convolve(mu, {n})[0]);
  throw std::invalid_argument("GridConvolver: kernel not configured");
}

LsOperator::LsOperator(const CoefficientField& field, const DispersionData& d, const CorrectionTable& t)
    : field_(field), conv_(d, t, field.grid, field.grid, {0, 1, 2, 3, 4, 5, 6, 7}) {
  const std::size_t n = field_.grid.size();
  if (field_.H.size() != n) throw std::invalid_argument("LsOperator: field does not match its grid");
  const double nu = field_.nu, a0 = field_.alpha0;
  const cdouble b0 = field_.beta0;
  for (auto& c : coef_) c.assign(n, 0.0);
  diag_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const CoefficientField& f = field_;
    diag_[i] = f.alpha[i] / a0;
    coef_[0][i] = 2.0 * f.ax[i];
    coef_[1][i] = 2.0 * f.ay[i];
    coef_[2][i] = f.lap[i];
    coef_[3][i] = -(1.0 - nu) * f.axx[i];
    coef_[4][i] = -(1.0 - nu) * f.ayy[i];
    coef_[5][i] = 2.0 * (1.0 - nu) * f.axy[i];
    coef_[6][i] = (f.alpha_c[i] * b0 - a0 * f.beta_c[i]) / a0;
    coef_[7][i] = -2.0 * f.gamma * f.alpha_c[i] / a0;
  }
}

std::vector<cdouble> LsOperator::apply(const std::vector<cdouble>& mu) const {
  const auto terms = conv_.apply(mu);
  std::vector<cdouble> out(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    cdouble s = 0.0;
    if (field_.perturbed(i))
      for (int k = 0; k < kNumKernels; ++k) s += coef_[k][i] * terms[k][i];
    out[i] = diag_[i] * mu[i] + 0.5 * s;
  }
  return out;
}

DensityGrid LsOperator::apply(const DensityGrid& mu) const {
  if (!(mu.grid == field_.grid)) throw std::invalid_argument("LsOperator: density grid mismatch");
  DensityGrid out(mu.grid);
  out.values = apply(mu.values);
  return out;
}

std::vector<cdouble> LsOperator::kernel_term(int kernel, const std::vector<cdouble>& mu) const {
  std::vector<cdouble> t = conv_.apply_one(kernel, mu);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = field_.perturbed(i) ? coef_[kernel][i] * t[i] : 0.0;
  return t;
}

DensityGrid build_rhs(const Incident& inc, const CoefficientField& f, const DispersionData& d) {
  const Grid& g = f.grid;
  DensityGrid rhs(g);
  const double nu = f.nu, a0 = f.alpha0;
  // finite parts at a point source: angular averages with the log r terms dropped
  SmallRExpansion ex;
  if (inc.kind == Incident::Kind::point_source) ex = small_r_expansion(d, false, 2);
  const double k = inc.kind == Incident::Kind::plane_wave ? incident_wavenumber(inc, d) : 0.0;
  const double kx = k * std::cos(inc.direction), ky = k * std::sin(inc.direction);
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      const std::size_t i = g.index(c, r);
      if (!f.perturbed(i)) continue;
      const double x = g.x(c), y = g.y(r);
      // u = dz phi^inc and its derivatives
      cdouble phi, u, ux_lap, uy_lap, lap, uxx, uxy, uyy;
      if (inc.kind == Incident::Kind::plane_wave) {
        phi = std::exp(cdouble(0.0, kx * x + ky * y));
        u = k * phi;
        const cdouble I(0.0, 1.0);
        lap = -k * k * u;
        ux_lap = I * kx * lap, uy_lap = I * ky * lap;
        uxx = -kx * kx * u, uxy = -kx * ky * u, uyy = -ky * ky * u;
      } else {
        const double dx = x - inc.sx, dy = y - inc.sy;
        if (std::hypot(dx, dy) < 1e-12 * g.h) {
          phi = eval_Gphi_limit(d);
          u = 0.5 * eval_GS_limit(d);
          lap = 0.5 * (4.0 * ex.a[1] + 4.0 * ex.b[1]);
          uxx = uyy = 0.5 * (2.0 * ex.a[1] + 2.0 * ex.b[1]);
          ux_lap = uy_lap = uxy = 0.0;
        } else {
          const GreensEval ge = eval_derivatives(d, dx, dy);
          phi = ge.g_phi;
          u = 0.5 * ge.g_s;
          lap = 0.5 * ge.laplacian;
          ux_lap = 0.5 * ge.grad_laplacian[0], uy_lap = 0.5 * ge.grad_laplacian[1];
          uxx = 0.5 * ge.hessian[0], uxy = 0.5 * ge.hessian[1], uyy = 0.5 * ge.hessian[2];
        }
      }
      const cdouble op = 2.0 * (f.ax[i] * ux_lap + f.ay[i] * uy_lap) + f.lap[i] * lap +
                         (1.0 - nu) * (2.0 * f.axy[i] * uxy - f.axx[i] * uyy - f.ayy[i] * uxx);
      rhs.values[i] = -op - (f.alpha_c[i] * f.beta0 / a0 - f.beta_c[i]) * u + f.alpha_c[i] / a0 * f.gamma * phi;
    }
  return rhs;
}

DensityGrid compute_sigma(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t) {
  GridConvolver conv(d, t, mu.grid, mu.grid, {6});
  DensityGrid s(mu.grid);
  s.values = conv.apply(mu.values)[0];
  return s;
}

}  // namespace flexscat
