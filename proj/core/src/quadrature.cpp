#include "flexscat/quadrature.hpp"

#include <quadmath.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <stdexcept>

namespace flexscat {
namespace {

using f128 = __float128;

// Radial cutoff phi(r) = erfc((r^2 - R^2) / (2 R L)) / 2; lattice and radial
// integrals are truncated at r = R + 12 L where phi < 1e-120.
constexpr int kCutR = 42;
constexpr int kCutL = 3;
constexpr int kCutMax = kCutR + 12 * kCutL;

struct LatticePoint {
  int x, y;
  f128 r2, r, lnr, phi;
};

struct ZetaData {
  std::vector<LatticePoint> pts;
  std::vector<f128> rx, rw, romc;  // radial nodes, weights, 1 - phi
};

void gauss_legendre_128(int n, std::vector<f128>& x, std::vector<f128>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    f128 z = cosq(M_PIq * (i + (f128)0.75) / (n + (f128)0.5));
    f128 dp = 0;
    for (int it = 0; it < 100; ++it) {
      f128 p0 = 1, p1 = z;
      for (int k = 2; k <= n; ++k) {
        f128 p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1);
      f128 dz = p1 / dp;
      z -= dz;
      if (fabsq(dz) < (f128)1e-33) break;
    }
    x[i] = z;
    w[i] = 2 / ((1 - z * z) * dp * dp);
  }
}

f128 cutoff_arg(f128 r2) { return (r2 - (f128)(kCutR * kCutR)) / (f128)(2 * kCutR * kCutL); }

ZetaData build_zeta_data() {
  ZetaData z;
  for (int y = -kCutMax; y <= kCutMax; ++y)
    for (int x = -kCutMax; x <= kCutMax; ++x) {
      const int r2 = x * x + y * y;
      if (r2 == 0 || r2 >= kCutMax * kCutMax) continue;
      LatticePoint p;
      p.x = x;
      p.y = y;
      p.r2 = r2;
      p.r = sqrtq(p.r2);
      p.lnr = logq(p.r);
      p.phi = erfcq(cutoff_arg(p.r2)) / 2;
      z.pts.push_back(p);
    }
  std::vector<f128> gx, gw;
  gauss_legendre_128(24, gx, gw);
  const int panels = 2 * kCutMax / kCutL * 2;
  const f128 width = (f128)kCutMax / panels;
  for (int k = 0; k < panels; ++k) {
    const f128 a = k * width;
    for (size_t i = 0; i < gx.size(); ++i) {
      const f128 r = a + width * (gx[i] + 1) / 2;
      z.rx.push_back(r);
      z.rw.push_back(width * gw[i] / 2);
      z.romc.push_back(erfcq(-cutoff_arg(r * r)) / 2);
    }
  }
  return z;
}

const ZetaData& zeta_data() {
  static const ZetaData z = build_zeta_data();
  return z;
}

f128 ipow(f128 x, int n) {
  f128 out = 1;
  for (int i = 0; i < n; ++i) out *= x;
  return out;
}

// int_0^inf r^n log^lambda(r) phi(r) dr
f128 radial_integral(int n, int lambda) {
  const ZetaData& z = zeta_data();
  const f128 b = kCutMax;
  const f128 bn = ipow(b, n + 1);
  f128 full = lambda == 0 ? bn / (n + 1) : bn * (logq(b) / (n + 1) - (f128)1 / ((n + 1) * (n + 1)));
  f128 acc = 0;
  for (size_t i = 0; i < z.rx.size(); ++i) {
    f128 v = z.rw[i] * ipow(z.rx[i], n) * z.romc[i];
    if (lambda == 1) v *= logq(z.rx[i]);
    acc += v;
  }
  return full - acc;
}

// int_0^{2 pi} cos^A sin^B
f128 angular_integral(int a, int b) {
  if (a % 2 || b % 2) return 0;
  return 2 * tgammaq((f128)(a + 1) / 2) * tgammaq((f128)(b + 1) / 2) / tgammaq((f128)(a + b + 2) / 2);
}

f128 rpow(const LatticePoint& p, int s) {
  if (s >= 0) return s % 2 ? p.r * ipow(p.r2, (s - 1) / 2) : ipow(p.r2, s / 2);
  return 1 / (s % 2 ? p.r * ipow(p.r2, (-s - 1) / 2) : ipow(p.r2, -s / 2));
}

struct Column {
  int gi, gj;
  std::vector<Offset> pts;
  std::vector<int> signs;
  std::vector<double> values;
};

int sgn(int v) { return (v > 0) - (v < 0); }

StencilWeights fit_weights(Canonical k, int order) {
  const CanonicalShape s = canonical_shape(k);
  const int deg = s.degree();
  std::vector<std::pair<int, int>> mono;
  for (int p = 0; p <= order; ++p)
    for (int q = 0; q <= order; ++q)
      if ((s.a + p) % 2 == 0 && (s.b + q) % 2 == 0 && deg + 2 + p + q <= order) mono.push_back({p, q});
  const int nrow = int(mono.size());
  Eigen::VectorXd zv(nrow);
  for (int m = 0; m < nrow; ++m) zv(m) = zeta_moment(s.a, s.b, s.sigma, s.lambda, mono[m].first, mono[m].second);
  const double zscale = std::max(1.0, zv.cwiseAbs().maxCoeff());

  for (int radius = 2; radius <= 4; ++radius) {
    std::vector<Column> cand;
    for (int i = 0; i <= radius; ++i)
      for (int j = 0; j <= radius; ++j) {
        if (s.swap_symmetric && j > i) continue;
        Column c{i, j, {}, {}, {}};
        auto add = [&](int x, int y) {
          const int sg = (s.a % 2 ? sgn(x) : 1) * (s.b % 2 ? sgn(y) : 1);
          if (sg == 0) return;
          for (const Offset& o : c.pts)
            if (o.i == x && o.j == y) return;
          c.pts.push_back({x, y});
          c.signs.push_back(sg);
        };
        for (int sx : {1, -1})
          for (int sy : {1, -1}) {
            add(sx * i, sy * j);
            if (s.swap_symmetric) add(sx * j, sy * i);
          }
        if (c.pts.empty()) continue;
        c.values.assign(nrow, 0.0);
        for (int m = 0; m < nrow; ++m)
          for (size_t t = 0; t < c.pts.size(); ++t)
            c.values[m] += c.signs[t] * std::pow(c.pts[t].i, mono[m].first) * std::pow(c.pts[t].j, mono[m].second);
        cand.push_back(std::move(c));
      }
    std::stable_sort(cand.begin(), cand.end(), [](const Column& u, const Column& v) {
      const int du = u.gi * u.gi + u.gj * u.gj, dv = v.gi * v.gi + v.gj * v.gj;
      return du < dv;
    });
    // greedy selection of linearly independent orbit columns, nearest first
    std::vector<Eigen::VectorXd> basis;
    std::vector<int> chosen;
    for (int c = 0; c < int(cand.size()); ++c) {
      Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(cand[c].values.data(), nrow);
      const double n0 = v.norm();
      if (n0 == 0.0) continue;
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& b : basis) v -= b.dot(v) * b;
      if (v.norm() > 1e-9 * n0) {
        basis.push_back(v / v.norm());
        chosen.push_back(c);
      }
    }
    Eigen::MatrixXd a(nrow, chosen.size());
    for (size_t c = 0; c < chosen.size(); ++c)
      a.col(c) = Eigen::Map<const Eigen::VectorXd>(cand[chosen[c]].values.data(), nrow);
    Eigen::VectorXd w = a.colPivHouseholderQr().solve(zv);
    const double res = (a * w - zv).cwiseAbs().maxCoeff() / zscale;
    if (res > 1e-12) continue;
    StencilWeights out;
    out.residual = res;
    out.radius = radius;
    for (size_t c = 0; c < chosen.size(); ++c) {
      const Column& col = cand[chosen[c]];
      for (size_t t = 0; t < col.pts.size(); ++t) {
        out.offsets.push_back(col.pts[t]);
        out.weights.push_back(w(c) * col.signs[t]);
      }
    }
    return out;
  }
  throw std::runtime_error(std::string("quadrature: moment fit failed for ") + canonical_name(k));
}

struct KernelTerm {
  Canonical k;
  cdouble c;
};

struct KernelSplit {
  std::vector<KernelTerm> terms;
  cdouble centre = 0.0;
};

std::array<KernelSplit, kNumKernels> split_kernels(const DispersionData& d) {
  const SmallRExpansion s = small_r_expansion(d, false, 4);
  const SmallRExpansion g = small_r_expansion(d, true, 2);
  const cdouble a0 = s.a[0], a1 = s.a[1], b1 = s.b[1], b3 = s.b[3];
  using C = Canonical;
  std::array<KernelSplit, kNumKernels> k;
  k[0] = {{{C::x_r2, 4.0 * b1}, {C::x_r2log, 144.0 * b3}}, 0.0};
  k[1] = {{{C::y_r2, 4.0 * b1}, {C::y_r2log, 144.0 * b3}}, 0.0};
  k[2] = {{{C::log, 4.0 * b1}, {C::r4log, 36.0 * b3}}, 4.0 * a1 + 4.0 * b1};
  k[3] = {{{C::log, 2.0 * b1}, {C::yy_r2, 2.0 * b1}, {C::r4log, 6.0 * b3}, {C::yy_r2log, 24.0 * b3}}, 2.0 * a1 + b1};
  k[4] = {{{C::log, 2.0 * b1}, {C::xx_r2, 2.0 * b1}, {C::r4log, 6.0 * b3}, {C::xx_r2log, 24.0 * b3}}, 2.0 * a1 + b1};
  k[5] = {{{C::xy_r2, 2.0 * b1}}, 0.0};
  k[6] = {{{C::r2log, b1}}, a0};
  k[7] = {{{C::r3, g.c[1]}}, g.a[0]};
  return k;
}

std::uint64_t fnv1a(const void* data, size_t n, std::uint64_t h = 1469598103934665603ull) {
  const unsigned char* p = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < n; ++i) h = (h ^ p[i]) * 1099511628211ull;
  return h;
}

constexpr char kMagic[4] = {'F', 'X', 'Q', 'C'};
constexpr std::uint32_t kFormatVersion = 1;

struct Fingerprint {
  double h;
  std::int64_t order;
  double alpha0, beta_re, beta_im, gamma;
};

Fingerprint fingerprint(const DispersionData& d, double h, int order) {
  return {h, order, d.params.alpha0, d.params.beta0.real(), d.params.beta0.imag(), d.params.gamma};
}

}  // namespace

CanonicalShape canonical_shape(Canonical k) {
  switch (k) {
    case Canonical::log: return {0, 0, 0, 1, true};
    case Canonical::r2log: return {0, 0, 2, 1, true};
    case Canonical::r4log: return {0, 0, 4, 1, true};
    case Canonical::r3: return {0, 0, 3, 0, true};
    case Canonical::x_r2: return {1, 0, -2, 0, false};
    case Canonical::y_r2: return {0, 1, -2, 0, false};
    case Canonical::xx_r2: return {2, 0, -2, 0, false};
    case Canonical::yy_r2: return {0, 2, -2, 0, false};
    case Canonical::xy_r2: return {1, 1, -2, 0, true};
    case Canonical::x_r2log: return {1, 0, 2, 1, false};
    case Canonical::y_r2log: return {0, 1, 2, 1, false};
    case Canonical::xx_r2log: return {2, 0, 2, 1, false};
    case Canonical::yy_r2log: return {0, 2, 2, 1, false};
  }
  throw std::invalid_argument("canonical_shape: unknown kernel");
}

const char* canonical_name(Canonical k) {
  static const char* names[] = {"log",    "r2log",   "r4log",   "r3",       "x_r2",     "y_r2",    "xx_r2",
                                "yy_r2",  "xy_r2",   "x_r2log", "y_r2log", "xx_r2log", "yy_r2log"};
  return names[int(k)];
}

double zeta_moment(int a, int b, int sigma, int lambda, int p, int q) {
  if (lambda < 0 || lambda > 1 || a < 0 || b < 0 || p < 0 || q < 0)
    throw std::invalid_argument("zeta_moment: unsupported exponents");
  const int ax = a + p, by = b + q;
  if (ax % 2 || by % 2) return 0.0;
  const int n = ax + by + sigma + 1;
  if (n < 1) throw std::invalid_argument("zeta_moment: integrand not integrable at the origin");
  const f128 integral = angular_integral(ax, by) * radial_integral(n, lambda);
  f128 sum = 0;
  for (const LatticePoint& pt : zeta_data().pts) {
    f128 v = ipow(pt.x, ax) * ipow(pt.y, by) * rpow(pt, sigma) * pt.phi;
    if (lambda) v *= pt.lnr;
    sum += v;
  }
  return (double)(integral - sum);
}

const StencilWeights& canonical_weights(Canonical k, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, StencilWeights> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(int(k), order);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, fit_weights(k, order)).first;
  return it->second;
}

cdouble kernel_value(int kernel, const GreensEval& g) {
  switch (kernel) {
    case 0: return g.grad_laplacian[0];
    case 1: return g.grad_laplacian[1];
    case 2: return g.laplacian;
    case 3: return g.hessian[2];
    case 4: return g.hessian[0];
    case 5: return g.hessian[1];
    case 6: return g.g_s;
    case 7: return g.g_phi;
  }
  throw std::invalid_argument("kernel_value: kernel index must be 0..7");
}

const char* kernel_name(int kernel) {
  static const char* names[] = {"K1", "K2", "K3", "K4", "K5", "K6", "K7", "K8"};
  if (kernel < 0 || kernel >= kNumKernels) throw std::invalid_argument("kernel_name: index must be 0..7");
  return names[kernel];
}

cdouble CorrectionTable::weight(int kernel, Offset o) const {
  for (size_t i = 0; i < stencil.size(); ++i)
    if (stencil[i] == o) return weights[kernel][i];
  return 0.0;
}

double CorrectionTable::stability_sum(int kernel) const {
  double s = 0.0;
  for (const cdouble& w : weights[kernel]) s += std::abs(w);
  return s;
}

CorrectionTable build_corrections(const DispersionData& d, double h, int order) {
  if (!(h > 0.0)) throw std::invalid_argument("build_corrections: h must be positive");
  if (order < 2) throw std::invalid_argument("build_corrections: order must be >= 2");
  CorrectionTable t;
  t.h = h;
  t.order = order;
  auto slot = [&](Offset o) {
    for (size_t i = 0; i < t.stencil.size(); ++i)
      if (t.stencil[i] == o) return i;
    t.stencil.push_back(o);
    for (auto& w : t.weights) w.push_back(0.0);
    return t.stencil.size() - 1;
  };
  slot({0, 0});
  const auto split = split_kernels(d);
  const double h2 = h * h;
  for (int j = 0; j < kNumKernels; ++j) {
    t.weights[j][0] += h2 * split[j].centre;
    for (const KernelTerm& term : split[j].terms) {
      const CanonicalShape s = canonical_shape(term.k);
      if (s.degree() + 2 > order) continue;
      const StencilWeights& sw = canonical_weights(term.k, order);
      const double scale = std::pow(h, s.degree() + 2);
      for (size_t i = 0; i < sw.offsets.size(); ++i) {
        const size_t at = slot(sw.offsets[i]);
        t.weights[j][at] += term.c * scale * sw.weights[i];
      }
      if (term.k == Canonical::log) t.weights[j][0] += term.c * h2 * std::log(h);
    }
  }
  return t;
}

void save_corrections(const CorrectionTable& t, const DispersionData& d, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_corrections: cannot open " + path);
  const Fingerprint fp = fingerprint(d, t.h, t.order);
  const std::uint32_t n = std::uint32_t(t.stencil.size());
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kFormatVersion), sizeof kFormatVersion);
  out.write(reinterpret_cast<const char*>(&fp), sizeof fp);
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (const Offset& o : t.stencil) {
    const std::int32_t ij[2] = {o.i, o.j};
    out.write(reinterpret_cast<const char*>(ij), sizeof ij);
  }
  for (const auto& w : t.weights) out.write(reinterpret_cast<const char*>(w.data()), n * sizeof(cdouble));
}

bool load_corrections(CorrectionTable& t, const DispersionData& d, double h, int order, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  char magic[4];
  std::uint32_t version = 0, n = 0;
  Fingerprint fp{};
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&fp), sizeof fp);
  in.read(reinterpret_cast<char*>(&n), sizeof n);
  const Fingerprint want = fingerprint(d, h, order);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kFormatVersion ||
      std::memcmp(&fp, &want, sizeof fp) != 0 || n > 4096)
    return false;
  CorrectionTable out;
  out.h = h;
  out.order = order;
  out.stencil.resize(n);
  for (auto& o : out.stencil) {
    std::int32_t ij[2];
    in.read(reinterpret_cast<char*>(ij), sizeof ij);
    o = {ij[0], ij[1]};
  }
  for (auto& w : out.weights) {
    w.resize(n);
    in.read(reinterpret_cast<char*>(w.data()), n * sizeof(cdouble));
  }
  if (!in) return false;
  t = std::move(out);
  return true;
}

CorrectionTable cached_corrections(const DispersionData& d, double h, int order) {
  const char* dir = std::getenv("FLEXSCAT_CACHE_DIR");
  if (!dir || !*dir) return build_corrections(d, h, order);
  const Fingerprint fp = fingerprint(d, h, order);
  char name[64];
  std::snprintf(name, sizeof name, "corrections_v%u_%016llx.bin", kFormatVersion,
                static_cast<unsigned long long>(fnv1a(&fp, sizeof fp)));
  const std::string path = (std::filesystem::path(dir) / name).string();
  CorrectionTable t;
  if (load_corrections(t, d, h, order, path)) return t;
  t = build_corrections(d, h, order);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  try {
    save_corrections(t, d, path);
  } catch (const std::exception&) {
  }
  return t;
}

cdouble apply_corrected_rule(const CorrectionTable& t, int kernel, const DispersionData& d, const DensityGrid& mu,
                             int col, int row) {
  const Grid& g = mu.grid;
  if (col < 0 || col >= g.cols() || row < 0 || row >= g.rows())
    throw std::out_of_range("apply_corrected_rule: target outside grid");
  const double h = g.h;
  cdouble acc = 0.0;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) {
      const cdouble m = mu.at(c, r);
      if ((c == col && r == row) || m == 0.0) continue;
      const GreensEval e = eval_derivatives(d, h * (col - c), h * (row - r));
      acc += kernel_value(kernel, e) * m;
    }
  acc *= h * h;
  for (size_t i = 0; i < t.stencil.size(); ++i) {
    const int c = col - t.stencil[i].i, r = row - t.stencil[i].j;
    if (c < 0 || c >= g.cols() || r < 0 || r >= g.rows()) continue;
    acc += t.weights[kernel][i] * mu.at(c, r);
  }
  return acc;
}

}  // namespace flexscat
