#include "app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "flexscat/reference.hpp"

#ifndef FLEXSCAT_VERSION
#define FLEXSCAT_VERSION "0.0.0"
#endif

namespace flexscat::app {
namespace {

namespace fs = std::filesystem;

class Log {
 public:
  explicit Log(bool on) : on_(on), t0_(std::chrono::steady_clock::now()) {}
  template <class... A>
  void operator()(const char* fmt, A... a) const {
    if (!on_) return;
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count();
    std::fprintf(stderr, "[%8.2fs] ", t);
    std::fprintf(stderr, fmt, a...);
    std::fputc('\n', stderr);
  }

 private:
  bool on_;
  std::chrono::steady_clock::time_point t0_;
};

// Calls fn(i) for i in [0, n) on up to `jobs` threads.
template <class F>
void parallel_for(int n, int jobs, F fn) {
  jobs = std::clamp(jobs, 1, std::max(n, 1));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  std::vector<std::thread> pool;
  for (int w = 0; w < jobs; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next++) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::string fmt(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream o(path);
  if (!o) throw IoError("cannot write " + path.string());
  o << text;
  if (!o) throw IoError("write failed for " + path.string());
}

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

json complex_json(cdouble z) { return json::array({z.real(), z.imag()}); }

json dispersion_json(const DispersionData& d, double omega, double background) {
  json roots = json::array();
  for (cdouble r : d.roots) roots.push_back(complex_json(r));
  json j = {{"omega_rad_per_s", omega},
            {"background_thickness_m", background},
            {"alpha0", d.params.alpha0},
            {"beta0", complex_json(d.params.beta0)},
            {"gamma", d.params.gamma},
            {"nu", d.params.nu},
            {"roots", roots},
            {"regime", d.regime() == Regime::radiating ? "radiating" : "dissipative"}};
  if (d.regime() == Regime::radiating) j["wavenumber_per_m"] = d.wavenumber();
  return j;
}

json grid_json(const Grid& g) {
  return {{"h_m", g.h}, {"cols", g.cols()}, {"rows", g.rows()}, {"center_m", json::array({g.x0, g.y0})}};
}

json meta_document(const RunConfig& cfg, const json& results) {
  return {{"format", "flexscat-meta"}, {"version", version_string()}, {"config", to_json(cfg)}, {"results", results}};
}

// Odd grid at spacing h centred on the configured centre, covering the samples with FD room.
Grid sample_grid(const RunConfig& cfg, double h, const std::vector<Point2>& samples) {
  double half = 0.0;
  for (const Point2& p : samples)
    half = std::max({half, std::abs(p[0] - cfg.grid_center[0]), std::abs(p[1] - cfg.grid_center[1])});
  Grid g = square_grid(h, half + 6 * h);
  g.x0 = cfg.grid_center[0], g.y0 = cfg.grid_center[1];
  return g;
}

std::vector<Point2> residual_samples(const RunConfig& cfg) {
  if (!cfg.residual_samples.empty()) return cfg.residual_samples;
  std::vector<Point2> s = default_residual_samples();
  for (Point2& p : s) p[0] += cfg.grid_center[0], p[1] += cfg.grid_center[1];
  return s;
}

std::string history_csv(const SolveResult& r) {
  std::string s = "iteration,relative_residual\n";
  for (std::size_t i = 0; i < r.residual_history.size(); ++i) s += std::to_string(i) + "," + fmt(r.residual_history[i]) + "\n";
  return s;
}

DensityGrid as_grid(const Grid& g, const std::vector<cdouble>& v) {
  DensityGrid d(g);
  d.values = v;
  return d;
}

int integer_ratio(double a, double b) {
  const double r = a / b;
  const long n = std::lround(r);
  if (n < 1 || std::abs(r - double(n)) > 1e-9 * r) return 0;
  return int(n);
}

// --- harness kinds ---------------------------------------------------------

int quadrature_convergence(const RunConfig& cfg, const Options& opt, const Log& log, json& results) {
  const HarnessSpec& hs = cfg.harness;
  const ScatterProblem base = make_problem(cfg);
  const PhysicalParams params =
      hs.params ? *hs.params : derive_params(base.ice, background_thickness(base.profile, base.ice));
  const DispersionData d = solve_dispersion(params);
  const double s = hs.density_sigma_m;
  const Point2 c = hs.density_center_m;
  auto mu = [&](double x, double y) {
    const double dx = x - c[0], dy = y - c[1];
    return std::exp(-(dx * dx + dy * dy) / (2 * s * s));
  };
  std::vector<double> steps = hs.hs_m;
  if (steps.empty()) steps = {0.8 * s, 0.4 * s, 0.2 * s, 0.1 * s};
  std::vector<int> kernels = hs.kernels;
  if (kernels.empty())
    for (int k = 0; k < kNumKernels; ++k) kernels.push_back(k);
  const double off = std::hypot(c[0], c[1]);
  log("polar reference, rmax %.3g", off + 11 * s);
  const auto ref = reference::polar_oracle(d, mu, 0.0, 0.0, off + 11 * s, 0.5 * s);
  std::vector<std::array<cdouble, kNumKernels>> got(steps.size());
  parallel_for(int(steps.size()), opt.jobs, [&](int i) {
    got[i] = reference::corrected_lattice_sum(d, build_corrections(d, steps[i], cfg.order), mu, 0.0, 0.0,
                                               off + 9.5 * s);
  });
  std::string csv = "h,kernel,rel_error\n";
  json slopes = json::object();
  double worst = 1e300;
  for (int k : kernels) {
    std::vector<double> err;
    for (std::size_t i = 0; i < steps.size(); ++i) {
      err.push_back(std::abs(got[i][k] - ref[k]) / std::abs(ref[k]));
      csv += fmt(steps[i]) + "," + kernel_name(k) + "," + fmt(err.back()) + "\n";
    }
    const double slope = steps.size() >= 2 ? reference::fitted_slope(steps, err) : 0.0;
    slopes[kernel_name(k)] = slope;
    worst = std::min(worst, slope);
    log("%-14s slope %.2f  finest error %.2e", kernel_name(k), slope, err.back());
  }
  write_text(opt.output / "quadrature_convergence.csv", csv);
  const double need = hs.min_slope.value_or(5.7);
  results["slopes"] = slopes;
  results["min_slope"] = worst;
  results["threshold_min_slope"] = need;
  results["passed"] = worst >= need;
  return worst >= need ? kOk : kThresholdFailed;
}

int pde_consistency(const RunConfig& cfg, const Options& opt, const Log& log, json& results) {
  const HarnessSpec& hs = cfg.harness;
  std::vector<double> steps = hs.hs_m;
  if (steps.empty()) steps = {0.5, 0.25, 0.125};
  std::sort(steps.begin(), steps.end(), std::greater<>());
  const std::vector<Point2> samples = residual_samples(cfg);
  const ScatterProblem base = make_problem(cfg);
  struct Row {
    ResidualReport r;
    int iterations = 0;
    bool converged = false;
  };
  std::vector<Row> rows(steps.size());
  parallel_for(int(steps.size()), opt.jobs, [&](int i) {
    ScatterProblem p = base;
    p.grid = make_grid(cfg, steps[i]);
    const ScatterSolution s = solve_scatter(p);
    const FieldBundle b =
        reconstruct_fields(s.mu, s.dispersion, s.table, p.incident, sample_grid(cfg, steps[i], samples));
    rows[i] = {pde_residual(b, s.field, samples), s.stats.iterations, s.stats.converged};
    log("h %.4g: %d iterations, rel_linf %.3e, rel_l2 %.3e", steps[i], s.stats.iterations, rows[i].r.rel_linf,
        rows[i].r.rel_l2);
  });
  std::string csv = "h,rel_l2,rel_linf,iterations\n";
  std::vector<double> linf;
  bool converged = true, decreasing = true;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    csv += fmt(steps[i]) + "," + fmt(rows[i].r.rel_l2) + "," + fmt(rows[i].r.rel_linf) + "," +
           std::to_string(rows[i].iterations) + "\n";
    linf.push_back(rows[i].r.rel_linf);
    converged = converged && rows[i].converged;
    if (i > 0 && !(linf[i] < linf[i - 1])) decreasing = false;
  }
  write_text(opt.output / "pde_consistency.csv", csv);
  const double need = hs.max_final_rel_linf.value_or(1e-5);
  const bool ok = linf.back() <= need && (decreasing || !hs.require_decreasing);
  results["slope"] = steps.size() >= 2 ? reference::fitted_slope(steps, linf) : 0.0;
  results["final_rel_linf"] = linf.back();
  results["decreasing"] = decreasing;
  results["threshold_max_final_rel_linf"] = need;
  results["samples"] = samples.size();
  results["passed"] = ok;
  if (!converged) return kNotConverged;
  return ok ? kOk : kThresholdFailed;
}

int self_convergence(const RunConfig& cfg, const Options& opt, const Log& log, json& results) {
  const HarnessSpec& hs = cfg.harness;
  std::vector<double> steps = hs.hs_m;
  if (steps.empty()) steps = {1.0, 0.5, 0.25, 0.125};
  if (steps.size() < 3) throw ConfigError("harness.hs_m: self_convergence needs at least three spacings");
  std::sort(steps.begin(), steps.end(), std::greater<>());
  const double fine = steps.back();
  for (double h : steps) {
    if (!integer_ratio(h, fine)) throw ConfigError("harness.hs_m: every spacing must be a multiple of the finest");
    if (!integer_ratio(cfg.grid_half_width, h))
      throw ConfigError("grid.half_width_m: must be a multiple of every spacing for self_convergence");
  }
  const ScatterProblem base = make_problem(cfg);
  std::vector<DensityGrid> mus(steps.size());
  std::vector<int> iters(steps.size());
  std::vector<char> conv(steps.size());
  parallel_for(int(steps.size()), opt.jobs, [&](int i) {
    ScatterProblem p = base;
    p.grid = make_grid(cfg, steps[i]);
    const ScatterSolution s = solve_scatter(p);
    mus[i] = fft_interpolate(embed(s.mu, p.grid), integer_ratio(steps[i], fine));
    iters[i] = s.stats.iterations, conv[i] = s.stats.converged;
    log("h %.4g: %zu unknowns, %d iterations", steps[i], s.mu.values.size(), s.stats.iterations);
  });
  double scale = 0.0;
  for (cdouble v : mus.back().values) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  std::string csv = "h,max_diff_to_next,iterations\n";
  std::vector<double> hx, diffs;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    double e = 0.0;
    for (std::size_t j = 0; j < mus[i].values.size(); ++j) e = std::max(e, std::abs(mus[i].values[j] - mus[i + 1].values[j]));
    hx.push_back(steps[i]), diffs.push_back(e / scale);
    csv += fmt(steps[i]) + "," + fmt(e / scale) + "," + std::to_string(iters[i]) + "\n";
  }
  write_text(opt.output / "self_convergence.csv", csv);
  write_grid(mus.back(), (opt.output / "mu_fine.grid").string());
  const double slope = reference::fitted_slope(hx, diffs);
  const double need = hs.min_slope.value_or(5.5);
  results["slope"] = slope;
  results["threshold_min_slope"] = need;
  results["fine_h_m"] = fine;
  results["passed"] = slope >= need;
  log("fitted slope %.2f", slope);
  if (std::find(conv.begin(), conv.end(), 0) != conv.end()) return kNotConverged;
  return slope >= need ? kOk : kThresholdFailed;
}

int sweep(const RunConfig& cfg, const Options& opt, const Log& log, json& results) {
  const HarnessSpec& hs = cfg.harness;
  if (!cfg.probe_upstream || !cfg.probe_downstream) throw ConfigError("probes: sweep needs upstream_m and downstream_m");
  std::vector<double> ks = hs.k_values_per_m;
  for (const auto& e : hs.expect)
    if (std::find(ks.begin(), ks.end(), e.k) == ks.end()) ks.push_back(e.k);
  if (ks.empty()) throw ConfigError("harness.k_values_per_m: sweep needs wavenumbers");
  std::sort(ks.begin(), ks.end());
  for (double k : ks)
    if (!(k >= hs.k_min_per_m && k <= hs.k_max_per_m))
      throw ConfigError("harness.k_values_per_m: " + fmt(k) + " outside k_range_per_m");
  const ScatterProblem base = make_problem(cfg);
  std::vector<ProbeRow> rows(ks.size());
  parallel_for(int(ks.size()), opt.jobs, [&](int i) {
    rows[i] = probe_sweep(base, {ks[i]}, *cfg.probe_upstream, *cfg.probe_downstream)[0];
    log("k %.6g: R %.4f T %.4f (%d iterations)", ks[i], rows[i].reflected_abs, rows[i].transmitted_abs,
        rows[i].iterations);
  });
  write_sweep_csv(rows, (opt.output / "sweep.csv").string());
  bool ok = true, converged = true;
  json checks = json::array();
  for (const ProbeRow& r : rows) converged = converged && r.converged;
  for (const auto& e : hs.expect) {
    const auto it = std::find_if(rows.begin(), rows.end(), [&](const ProbeRow& r) { return r.k == e.k; });
    const bool pass = e.dominant == "reflected" ? it->reflected_abs > it->transmitted_abs
                                                : it->transmitted_abs > it->reflected_abs;
    ok = ok && pass;
    checks.push_back({{"k_per_m", e.k}, {"dominant", e.dominant}, {"passed", pass}});
  }
  results["checks"] = checks;
  results["passed"] = ok;
  if (!converged) return kNotConverged;
  return ok ? kOk : kThresholdFailed;
}

}  // namespace

const char* version_string() { return "flexscat " FLEXSCAT_VERSION; }

int run(const RunConfig& cfg, const Options& opt) {
  const Log log(opt.verbose);
  prepare_output(opt.output);
  const ScatterProblem p = make_problem(cfg);
  log("omega %.10g rad/s, grid %dx%d at h %.4g", p.ice.omega, p.grid.cols(), p.grid.rows(), p.grid.h);
  const ScatterSolution s = solve_scatter(p);
  for (const std::string& w : s.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  log("support %dx%d, %d iterations, residual %.3e", s.support.cols(), s.support.rows(), s.stats.iterations,
      s.stats.true_residual);
  write_text(opt.output / "residuals.csv", history_csv(s.stats));
  write_grid(s.mu, (opt.output / "mu.grid").string());

  json results;
  results["dispersion"] = dispersion_json(s.dispersion, p.ice.omega, background_thickness(p.profile, p.ice));
  results["support"] = grid_json(s.support);
  results["unknowns"] = s.mu.values.size();
  results["solver"] = {{"iterations", s.stats.iterations},
                       {"converged", s.stats.converged},
                       {"true_residual", s.stats.true_residual}};
  results["warnings"] = s.warnings;
  results["min_thickness_m"] = s.field.min_thickness();

  if (cfg.write_fields || cfg.pde_check) {
    DensityGrid mu = s.mu;
    CorrectionTable table = s.table;
    Grid target = p.grid;
    if (cfg.refine_factor > 1) {
      mu = fft_interpolate(s.mu, cfg.refine_factor);
      table = cached_corrections(s.dispersion, p.grid.h / cfg.refine_factor, p.order);
      target.h /= cfg.refine_factor;
      target.nx = (p.grid.nx - 1) * cfg.refine_factor + 1;
      target.ny = (p.grid.ny - 1) * cfg.refine_factor + 1;
    }
    const FieldBundle b = reconstruct_fields(mu, s.dispersion, table, p.incident, target);
    log("fields on %dx%d", target.cols(), target.rows());
    if (cfg.write_fields) {
      write_grid(as_grid(target, b.phi), (opt.output / "phi.grid").string());
      write_grid(as_grid(target, b.dz_phi), (opt.output / "dz_phi.grid").string());
      write_grid(as_grid(target, b.phi_scat), (opt.output / "phi_scat.grid").string());
    }
    if (cfg.pde_check) {
      const ResidualReport r = pde_residual(b, s.field, residual_samples(cfg));
      results["pde_residual"] = {{"rel_l2", r.rel_l2}, {"rel_linf", r.rel_linf}, {"samples", r.samples}};
      log("pde residual linf %.3e l2 %.3e", r.rel_linf, r.rel_l2);
    }
  }

  if (cfg.probe_upstream && cfg.probe_downstream) {
    const auto v = evaluate_points(s.mu, s.dispersion, s.table, {*cfg.probe_upstream, *cfg.probe_downstream});
    const IncidentTrace down = incident_trace(p.incident, s.dispersion, (*cfg.probe_downstream)[0],
                                              (*cfg.probe_downstream)[1]);
    const ProbeRow row{incident_wavenumber(p.incident, s.dispersion), std::abs(v[0].phi_scat),
                       std::abs(down.phi + v[1].phi_scat), s.stats.iterations, s.stats.converged};
    write_sweep_csv({row}, (opt.output / "probes.csv").string());
    results["probes"] = {{"k_per_m", row.k},
                         {"reflected_abs", row.reflected_abs},
                         {"transmitted_abs", row.transmitted_abs}};
  }
  write_text(opt.output / "meta.json", meta_document(cfg, results).dump(2) + "\n");
  if (!s.stats.converged) {
    std::fprintf(stderr, "error: GMRES did not converge in %d iterations (residual %.3e)\n", s.stats.iterations,
                 s.stats.true_residual);
    return kNotConverged;
  }
  return kOk;
}

int harness(const std::string& kind_arg, const RunConfig& cfg_in, const Options& opt) {
  RunConfig cfg = cfg_in;
  if (!kind_arg.empty()) {
    if (!cfg.harness.kind.empty() && cfg.harness.kind != kind_arg)
      throw ConfigError("harness.kind is '" + cfg.harness.kind + "' but '" + kind_arg + "' was requested");
    cfg.harness.kind = kind_arg;
  }
  const std::string& kind = cfg.harness.kind;
  const Log log(opt.verbose);
  prepare_output(opt.output);
  json results;
  int code;
  if (kind == "quadrature_convergence") {
    code = quadrature_convergence(cfg, opt, log, results);
  } else if (kind == "pde_consistency") {
    code = pde_consistency(cfg, opt, log, results);
  } else if (kind == "self_convergence") {
    code = self_convergence(cfg, opt, log, results);
  } else if (kind == "sweep") {
    code = sweep(cfg, opt, log, results);
  } else {
    throw ConfigError("harness kind: expected quadrature_convergence, pde_consistency, self_convergence or sweep");
  }
  write_text(opt.output / "meta.json", meta_document(cfg, results).dump(2) + "\n");
  if (code == kThresholdFailed) std::fprintf(stderr, "%s: threshold not met\n", kind.c_str());
  if (code == kNotConverged) std::fprintf(stderr, "%s: a solve did not converge\n", kind.c_str());
  return code;
}

}  // namespace flexscat::app
