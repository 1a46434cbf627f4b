#include "flexscat/postprocess.hpp"

#include <fftw3.h>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "fftw_lock.hpp"

namespace flexscat {
namespace {

bool lattice_offset(const Grid& a, const Grid& b, int& dc, int& dr) {
  if (std::abs(a.h - b.h) > 1e-14 * a.h) return false;
  const double fx = (b.x(0) - a.x(0)) / a.h, fy = (b.y(0) - a.y(0)) / a.h;
  dc = int(std::lround(fx)), dr = int(std::lround(fy));
  return std::abs(fx - dc) < 1e-9 && std::abs(fy - dr) < 1e-9;
}

bool node_of(const Grid& g, double x, double y, int& c, int& r) {
  const double fc = (x - g.x(0)) / g.h, fr = (y - g.y(0)) / g.h;
  c = int(std::lround(fc)), r = int(std::lround(fr));
  return std::abs(fc - c) < 1e-9 && std::abs(fr - r) < 1e-9 && c >= 0 && r >= 0 && c < g.cols() && r < g.rows();
}

void fft2(std::vector<cdouble>& a, int nx, int ny, int sign) {
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
    plan = fftw_plan_dft_2d(ny, nx, p, p, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(detail::fftw_planner_mutex());
  fftw_destroy_plan(plan);
}

template <class T>
void put(std::ostream& o, T v) {
  o.write(reinterpret_cast<const char*>(&v), sizeof v);
}
template <class T>
T get(std::istream& i) {
  T v;
  i.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!i) throw std::runtime_error("read_grid: truncated file");
  return v;
}

}  // namespace

FieldBundle reconstruct_fields(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t,
                               const Incident& inc, const Grid& target) {
  FieldBundle b;
  b.grid = target;
  GridConvolver conv(d, t, mu.grid, target, {7, 6});
  auto out = conv.apply(mu.values);
  b.phi_scat = std::move(out[0]);
  b.dz_scat = std::move(out[1]);
  const std::size_t n = target.size();
  b.phi.resize(n), b.dz_phi.resize(n);
  for (int r = 0; r < target.rows(); ++r)
    for (int c = 0; c < target.cols(); ++c) {
      const std::size_t i = target.index(c, r);
      b.dz_scat[i] *= 0.5;
      const IncidentTrace tr = incident_trace(inc, d, target.x(c), target.y(r));
      b.phi[i] = tr.phi + b.phi_scat[i];
      b.dz_phi[i] = tr.dz + b.dz_scat[i];
    }
  return b;
}

std::vector<PointFields> evaluate_points(const DensityGrid& mu, const DispersionData& d, const CorrectionTable& t,
                                         const std::vector<Point2>& points) {
  const Grid& g = mu.grid;
  const double h = g.h;
  int reach = 0;
  for (const Offset& o : t.stencil) reach = std::max({reach, std::abs(o.i), std::abs(o.j)});
  std::vector<PointFields> out(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    const double px = points[p][0], py = points[p][1];
    const double fc = (px - g.x(0)) / h, fr = (py - g.y(0)) / h;
    const bool near = fc > -reach - 1 && fr > -reach - 1 && fc < g.cols() + reach && fr < g.rows() + reach;
    const int pc = int(std::lround(fc)), pr = int(std::lround(fr));
    if (near && (std::abs(fc - pc) > 1e-9 || std::abs(fr - pr) > 1e-9))
      throw std::invalid_argument("evaluate_points: off-lattice point too close to the density");
    cdouble sp = 0.0, sz = 0.0;
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c) {
        const cdouble m = mu.at(c, r);
        if (m == 0.0) continue;
        const double dx = px - g.x(c), dy = py - g.y(r);
        if (!near || pc != c || pr != r) {
          const RadialGreens rad = eval_radial(d, std::hypot(dx, dy), 0);
          sp += h * h * rad.gphi * m;
          sz += h * h * rad.gs[0] * m;
        }
        if (near && std::abs(pc - c) <= reach && std::abs(pr - r) <= reach) {
          sp += t.weight(7, {pc - c, pr - r}) * m;
          sz += t.weight(6, {pc - c, pr - r}) * m;
        }
      }
    out[p] = {sp, 0.5 * sz};
  }
  return out;
}

DensityGrid embed(const DensityGrid& data, const Grid& target) {
  int dc, dr;
  if (!lattice_offset(target, data.grid, dc, dr) || dc < 0 || dr < 0 || dc + data.grid.cols() > target.cols() ||
      dr + data.grid.rows() > target.rows())
    throw std::invalid_argument("embed: target does not contain the data grid");
  DensityGrid out(target);
  for (int r = 0; r < data.grid.rows(); ++r)
    for (int c = 0; c < data.grid.cols(); ++c) out.at(c + dc, r + dr) = data.at(c, r);
  return out;
}

DensityGrid fft_interpolate(const DensityGrid& data, int factor) {
  if (factor < 1) throw std::invalid_argument("fft_interpolate: factor must be >= 1");
  if (factor == 1) return data;
  const int n = data.grid.cols(), m = data.grid.rows();
  const int N = n * factor, M = m * factor;
  std::vector<cdouble> a = data.values;
  fft2(a, n, m, FFTW_FORWARD);
  // odd lengths: frequencies -(n-1)/2 .. (n-1)/2, no Nyquist term to split
  std::vector<cdouble> b(std::size_t(N) * M, 0.0);
  const int hn = (n - 1) / 2, hm = (m - 1) / 2;
  for (int q = -hm; q <= hm; ++q)
    for (int p = -hn; p <= hn; ++p)
      b[std::size_t((q + M) % M) * N + (p + N) % N] = a[std::size_t((q + m) % m) * n + (p + n) % n];
  fft2(b, N, M, FFTW_BACKWARD);
  Grid g = data.grid;
  g.h = data.grid.h / factor;
  g.nx = (data.grid.nx - 1) * factor + 1;
  g.ny = (data.grid.ny - 1) * factor + 1;
  DensityGrid out(g);
  const double s = 1.0 / (double(n) * m);
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) out.at(c, r) = s * b[std::size_t(r) * N + c];
  return out;
}

std::vector<double> fd_weights(int derivative, int half_width) {
  // Fornberg, on nodes -w..w evaluated at 0
  const int n = 2 * half_width + 1;
  if (derivative < 0 || derivative >= n) throw std::invalid_argument("fd_weights: derivative too high for the stencil");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = i - half_width;
  std::vector<std::vector<double>> c(n, std::vector<double>(derivative + 1, 0.0));
  double c1 = 1.0, c4 = x[0];
  c[0][0] = 1.0;
  for (int i = 1; i < n; ++i) {
    const int mn = std::min(i, derivative);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i];
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int k = mn; k >= 1; --k) c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = c[i][derivative];
  return w;
}

std::vector<Point2> default_residual_samples() {
  std::vector<Point2> s;
  for (int n = -8; n <= 8; ++n)
    for (int m = -8; m <= 8; ++m) s.push_back({0.5 * m, 0.5 * n});
  return s;
}

ResidualReport pde_residual(const FieldBundle& b, const CoefficientField& f, const std::vector<Point2>& samples) {
  const Grid& g = b.grid;
  const double h = g.h;
  const std::vector<double> d1 = fd_weights(1, 4), d2 = fd_weights(2, 4), d3 = fd_weights(3, 5),
                            d4 = fd_weights(4, 5);
  const int W = 5;
  ResidualReport rep;
  double r2 = 0.0, t2 = 0.0, rmax = 0.0, tmax = 0.0;
  for (const Point2& s : samples) {
    int c, r, fc, fr;
    if (!node_of(g, s[0], s[1], c, r) || c < W || r < W || c + W >= g.cols() || r + W >= g.rows())
      throw std::invalid_argument("pde_residual: sample point is not an interior node of the field grid");
    if (!node_of(f.grid, s[0], s[1], fc, fr))
      throw std::invalid_argument("pde_residual: sample point is not a node of the coefficient grid");
    auto w = [&](int i, int j) { return b.dz_phi[g.index(c + i, r + j)]; };
    auto dx = [&](const std::vector<double>& k, int j) {
      const int hw = int(k.size()) / 2;
      cdouble s = 0.0;
      for (int i = -hw; i <= hw; ++i) s += k[i + hw] * w(i, j);
      return s;
    };
    auto dy = [&](const std::vector<double>& k, int i) {
      const int hw = int(k.size()) / 2;
      cdouble s = 0.0;
      for (int j = -hw; j <= hw; ++j) s += k[j + hw] * w(i, j);
      return s;
    };
    // tensor products D_x^a D_y^b
    auto dxy = [&](const std::vector<double>& kx, const std::vector<double>& ky) {
      const int hx = int(kx.size()) / 2, hy = int(ky.size()) / 2;
      cdouble s = 0.0;
      for (int j = -hy; j <= hy; ++j)
        for (int i = -hx; i <= hx; ++i) s += kx[i + hx] * ky[j + hy] * w(i, j);
      return s;
    };
    const double h2 = h * h, h3 = h2 * h, h4 = h2 * h2;
    const cdouble wxx = dx(d2, 0) / h2, wyy = dy(d2, 0) / h2, wxy = dxy(d1, d1) / h2;
    const cdouble wxxx = dx(d3, 0) / h3, wyyy = dy(d3, 0) / h3;
    const cdouble wxyy = dxy(d1, d2) / h3, wxxy = dxy(d2, d1) / h3;
    const cdouble wxxxx = dx(d4, 0) / h4, wyyyy = dy(d4, 0) / h4, wxxyy = dxy(d2, d2) / h4;
    const std::size_t k = f.grid.index(fc, fr);
    const double nu = f.nu;
    const cdouble bih = wxxxx + 2.0 * wxxyy + wyyyy;
    const cdouble terms[] = {f.alpha[k] * bih,
                             2.0 * (f.ax[k] * (wxxx + wxyy) + f.ay[k] * (wxxy + wyyy)),
                             f.lap[k] * (wxx + wyy),
                             (1.0 - nu) * (2.0 * f.axy[k] * wxy - f.axx[k] * wyy - f.ayy[k] * wxx),
                             -f.beta[k] * w(0, 0),
                             f.gamma * b.phi[g.index(c, r)]};
    cdouble res = 0.0;
    double big = 0.0;
    for (const cdouble& t : terms) res += t, big = std::max(big, std::abs(t));
    r2 += std::norm(res), t2 += big * big;
    rmax = std::max(rmax, std::abs(res)), tmax = std::max(tmax, big);
  }
  rep.samples = samples.size();
  rep.rel_l2 = std::sqrt(r2 / t2);
  rep.rel_linf = rmax / tmax;
  return rep;
}

std::vector<ProbeRow> probe_sweep(const ScatterProblem& base, const std::vector<double>& ks, Point2 upstream,
                                  Point2 downstream, double kmin, double kmax) {
  const double hb = background_thickness(base.profile, base.ice);
  std::vector<ProbeRow> rows;
  for (double k : ks) {
    if (!(k >= kmin && k <= kmax)) throw std::invalid_argument("probe_sweep: k outside [kmin, kmax]");
    ScatterProblem p = base;
    p.ice.omega = omega_for_wavenumber(base.ice, hb, k);
    p.incident.kind = Incident::Kind::plane_wave;
    p.incident.k = k;
    const ScatterSolution s = solve_scatter(p);
    const auto v = evaluate_points(s.mu, s.dispersion, s.table, {upstream, downstream});
    const IncidentTrace down = incident_trace(p.incident, s.dispersion, downstream[0], downstream[1]);
    rows.push_back({k, std::abs(v[0].phi_scat), std::abs(down.phi + v[1].phi_scat), s.stats.iterations,
                    s.stats.converged});
  }
  return rows;
}

void write_grid(const DensityGrid& g, const std::string& path) {
  std::ofstream o(path, std::ios::binary);
  if (!o) throw std::runtime_error("write_grid: cannot open " + path);
  o.write("FXGR", 4);
  put<std::uint32_t>(o, 1);
  put<double>(o, g.grid.h);
  put<std::int32_t>(o, g.grid.nx);
  put<std::int32_t>(o, g.grid.ny);
  put<double>(o, g.grid.x0);
  put<double>(o, g.grid.y0);
  put<std::uint32_t>(o, 1);
  o.write(reinterpret_cast<const char*>(g.values.data()), std::streamsize(g.values.size() * sizeof(cdouble)));
  if (!o) throw std::runtime_error("write_grid: write failed for " + path);
}

DensityGrid read_grid(const std::string& path) {
  std::ifstream i(path, std::ios::binary);
  if (!i) throw std::runtime_error("read_grid: cannot open " + path);
  char magic[4];
  i.read(magic, 4);
  if (!i || std::memcmp(magic, "FXGR", 4) != 0) throw std::runtime_error("read_grid: bad magic");
  if (get<std::uint32_t>(i) != 1) throw std::runtime_error("read_grid: unsupported version");
  Grid g;
  g.h = get<double>(i);
  g.nx = get<std::int32_t>(i);
  g.ny = get<std::int32_t>(i);
  g.x0 = get<double>(i);
  g.y0 = get<double>(i);
  if (get<std::uint32_t>(i) != 1) throw std::runtime_error("read_grid: unsupported dtype");
  if (g.nx < 1 || g.ny < 1) throw std::runtime_error("read_grid: bad extents");
  DensityGrid d(g);
  i.read(reinterpret_cast<char*>(d.values.data()), std::streamsize(d.values.size() * sizeof(cdouble)));
  if (!i) throw std::runtime_error("read_grid: truncated file");
  return d;
}

void write_sweep_csv(const std::vector<ProbeRow>& rows, const std::string& path) {
  std::ofstream o(path);
  if (!o) throw std::runtime_error("write_sweep_csv: cannot open " + path);
  o << "k,reflected_abs,transmitted_abs\n";
  auto num = [](double v) {
    char buf[32];
    return std::string(buf, std::to_chars(buf, buf + sizeof buf, v).ptr);
  };
  for (const ProbeRow& r : rows) o << num(r.k) << ',' << num(r.reflected_abs) << ',' << num(r.transmitted_abs) << '\n';
}

}  // namespace flexscat
