#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>

namespace flexscat::app {
namespace {

// Closed-world view of one JSON object: every key must be consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  double num(const std::string& key, double fallback) { return has(key) ? num(key) : fallback; }
  double num(const std::string& key) {
    const json& v = take(key);
    if (!v.is_number()) fail(sub(key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(sub(key), "expected a finite number");
    return x;
  }
  double positive(const std::string& key, double fallback) {
    const double x = num(key, fallback);
    if (!(x > 0.0)) fail(sub(key), "must be positive");
    return x;
  }
  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = take(key);
    if (!v.is_number_integer()) fail(sub(key), "expected an integer");
    return v.get<int>();
  }
  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = take(key);
    if (!v.is_boolean()) fail(sub(key), "expected true or false");
    return v.get<bool>();
  }
  std::string str(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = take(key);
    if (!v.is_string()) fail(sub(key), "expected a string");
    return v.get<std::string>();
  }
  Point2 point(const std::string& key, Point2 fallback) { return has(key) ? point(key) : fallback; }
  Point2 point(const std::string& key) {
    const json& v = take(key);
    return as_point(v, sub(key));
  }
  std::vector<double> numbers(const std::string& key) {
    std::vector<double> out;
    if (!has(key)) return out;
    const json& v = take(key);
    if (!v.is_array()) fail(sub(key), "expected an array of numbers");
    for (const json& e : v) {
      if (!e.is_number()) fail(sub(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }
  std::vector<Point2> points(const std::string& key) {
    std::vector<Point2> out;
    if (!has(key)) return out;
    const json& v = take(key);
    if (!v.is_array()) fail(sub(key), "expected an array of [x, y] pairs");
    for (const json& e : v) out.push_back(as_point(e, sub(key)));
    return out;
  }
  const json& raw(const std::string& key) { return take(key); }
  Section child(const std::string& key) { return Section(take(key), sub(key)); }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) fail(sub(it.key()), "unknown key");
  }

  std::string sub(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  [[noreturn]] static void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
  }

  static Point2 as_point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
      fail(where, "expected [x, y]");
    return {v[0].get<double>(), v[1].get<double>()};
  }

 private:
  const json& take(const std::string& key) {
    if (!has(key)) fail(sub(key), "missing");
    used_.insert(key);
    return j_.at(key);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

json point_json(Point2 p) { return json::array({p[0], p[1]}); }

ThicknessProfile parse_profile(Section s, bool& ridges_default) {
  const std::string kind = s.str("kind", "");
  ThicknessProfile out;
  if (kind == "constant") {
    ConstantProfile c;
    c.thickness = s.positive("thickness_m", c.thickness);
    out = c;
  } else if (kind == "gaussian_bump") {
    GaussianBump g;
    g.background = s.positive("background_m", g.background);
    g.amplitude = s.num("amplitude_m", g.amplitude);
    g.sigma = s.positive("sigma_m", g.sigma);
    const Point2 c = s.point("center_m", {g.cx, g.cy});
    g.cx = c[0], g.cy = c[1];
    out = g;
  } else if (kind == "rolls") {
    Rolls r;
    r.amplitude = s.num("amplitude_m", r.amplitude);
    r.width = s.positive("width_m", r.width);
    r.freeboard = s.positive("freeboard_m", r.freeboard);
    r.taper = s.positive("taper_per_m", r.taper);
    const Point2 xr = s.point("x_range_m", {r.x0, r.x1}), yr = s.point("y_range_m", {r.y0, r.y1});
    r.x0 = xr[0], r.x1 = xr[1], r.y0 = yr[0], r.y1 = yr[1];
    if (!(r.x1 > r.x0) || !(r.y1 > r.y0)) Section::fail(s.sub("x_range_m"), "ranges must be increasing");
    out = r;
  } else if (kind == "random_medium") {
    RandomMedium m;
    m.mean = s.positive("mean_m", m.mean);
    const Point2 a = s.point("amplitude_range_m", {m.amp_lo, m.amp_hi});
    m.amp_lo = a[0], m.amp_hi = a[1];
    if (m.amp_hi < m.amp_lo) Section::fail(s.sub("amplitude_range_m"), "must be [lo, hi] with lo <= hi");
    m.sigma = s.positive("sigma_m", m.sigma);
    m.spacing = s.positive("spacing_m", m.spacing);
    m.half_extent = s.num("half_extent_m", m.half_extent);
    if (m.half_extent < 0) Section::fail(s.sub("half_extent_m"), "must be non-negative");
    if (s.has("seed")) {
      const json& v = s.raw("seed");
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        Section::fail(s.sub("seed"), "expected a non-negative integer");
      m.seed = v.get<std::uint64_t>();
    }
    out = m;
  } else if (kind == "ridges") {
    RidgeCurves c = default_ridges();
    c.background = s.positive("background_m", c.background);
    c.sigma = s.positive("sigma_m", c.sigma);
    const double peak = s.num("ridge_peak_m", 3.0);
    c.amplitude = (peak - c.background) / (c.sigma * std::sqrt(2.0 * std::numbers::pi));
    ridges_default = true;
    if (s.has("curves_m")) {
      const json& v = s.raw("curves_m");
      if (v.is_string() && v.get<std::string>() == "default") {
      } else if (v.is_array()) {
        ridges_default = false;
        c.curves.clear();
        for (const json& poly : v) {
          if (!poly.is_array() || poly.size() < 2) Section::fail(s.sub("curves_m"), "each curve needs >= 2 points");
          std::vector<Point2> pts;
          for (const json& p : poly) pts.push_back(Section::as_point(p, s.sub("curves_m")));
          c.curves.push_back(std::move(pts));
        }
      } else {
        Section::fail(s.sub("curves_m"), "expected \"default\" or a list of polylines");
      }
    }
    out = c;
  } else if (kind == "spiral") {
    Spiral sp;
    sp.H0 = s.positive("H0_m", sp.H0);
    sp.a = s.positive("a_m", sp.a);
    const Point2 t = s.point("t_range_rad", {sp.t0, sp.t1});
    sp.t0 = t[0], sp.t1 = t[1];
    if (!(sp.t1 > sp.t0)) Section::fail(s.sub("t_range_rad"), "must be increasing");
    sp.sigma = s.positive("sigma_m", sp.sigma);
    sp.amplitude = s.num("amplitude_m", sp.amplitude);
    sp.calibrate_min = s.num("calibrate_min_m", sp.calibrate_min);
    out = sp;
  } else {
    Section::fail(s.sub("kind"),
                  "expected one of constant, gaussian_bump, rolls, random_medium, ridges, spiral");
  }
  s.finish();
  return out;
}

json profile_json(const ThicknessProfile& p, bool ridges_default) {
  struct V {
    bool ridges_default;
    json operator()(const ConstantProfile& c) const { return {{"kind", "constant"}, {"thickness_m", c.thickness}}; }
    json operator()(const GaussianBump& g) const {
      return {{"kind", "gaussian_bump"},
              {"background_m", g.background},
              {"amplitude_m", g.amplitude},
              {"sigma_m", g.sigma},
              {"center_m", point_json({g.cx, g.cy})}};
    }
    json operator()(const Rolls& r) const {
      return {{"kind", "rolls"},
              {"amplitude_m", r.amplitude},
              {"width_m", r.width},
              {"freeboard_m", r.freeboard},
              {"taper_per_m", r.taper},
              {"x_range_m", point_json({r.x0, r.x1})},
              {"y_range_m", point_json({r.y0, r.y1})}};
    }
    json operator()(const RandomMedium& m) const {
      return {{"kind", "random_medium"},
              {"mean_m", m.mean},
              {"amplitude_range_m", point_json({m.amp_lo, m.amp_hi})},
              {"sigma_m", m.sigma},
              {"spacing_m", m.spacing},
              {"half_extent_m", m.half_extent},
              {"seed", m.seed}};
    }
    json operator()(const RidgeCurves& c) const {
      json j = {{"kind", "ridges"},
                {"background_m", c.background},
                {"sigma_m", c.sigma},
                {"ridge_peak_m", c.background + c.amplitude * c.sigma * std::sqrt(2.0 * std::numbers::pi)}};
      if (ridges_default) {
        j["curves_m"] = "default";
      } else {
        json curves = json::array();
        for (const auto& poly : c.curves) {
          json pj = json::array();
          for (const Point2& q : poly) pj.push_back(point_json(q));
          curves.push_back(pj);
        }
        j["curves_m"] = curves;
      }
      return j;
    }
    json operator()(const Spiral& s) const {
      return {{"kind", "spiral"},
              {"H0_m", s.H0},
              {"a_m", s.a},
              {"t_range_rad", point_json({s.t0, s.t1})},
              {"sigma_m", s.sigma},
              {"amplitude_m", s.amplitude},
              {"calibrate_min_m", s.calibrate_min}};
    }
  };
  return std::visit(V{ridges_default}, p);
}

HarnessSpec parse_harness(Section s) {
  HarnessSpec h;
  h.kind = s.str("kind", "");
  static const std::set<std::string> kinds = {"", "quadrature_convergence", "pde_consistency", "self_convergence",
                                              "sweep"};
  if (!kinds.count(h.kind)) Section::fail(s.sub("kind"), "unknown harness kind '" + h.kind + "'");
  h.hs_m = s.numbers("hs_m");
  for (double x : h.hs_m)
    if (!(x > 0.0)) Section::fail(s.sub("hs_m"), "spacings must be positive");
  if (s.has("params")) {
    Section p = s.child("params");
    PhysicalParams q;
    q.alpha0 = p.positive("alpha0", q.alpha0);
    const Point2 b = p.point("beta0", {q.beta0.real(), q.beta0.imag()});
    q.beta0 = {b[0], b[1]};
    q.gamma = p.num("gamma", q.gamma);
    q.nu = p.num("nu", q.nu);
    p.finish();
    h.params = q;
  }
  h.density_sigma_m = s.positive("density_sigma_m", h.density_sigma_m);
  h.density_center_m = s.point("density_center_m", h.density_center_m);
  for (double k : s.numbers("kernels")) {
    if (k != std::floor(k) || k < 0 || k >= kNumKernels) Section::fail(s.sub("kernels"), "kernel ids are 0..7");
    h.kernels.push_back(int(k));
  }
  h.k_values_per_m = s.numbers("k_values_per_m");
  if (s.has("k_linspace_per_m")) {
    Section l = s.child("k_linspace_per_m");
    const double a = l.positive("start", 0.0), b = l.positive("stop", 0.0);
    const int n = l.integer("count", 0);
    l.finish();
    if (n < 1) Section::fail(s.sub("k_linspace_per_m.count"), "must be >= 1");
    for (int i = 0; i < n; ++i) h.k_values_per_m.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  }
  for (double k : h.k_values_per_m)
    if (!(k > 0.0)) Section::fail(s.sub("k_values_per_m"), "wavenumbers must be positive");
  if (s.has("k_range_per_m")) {
    const Point2 r = s.point("k_range_per_m");
    h.k_min_per_m = r[0], h.k_max_per_m = r[1];
  }
  if (s.has("expect")) {
    const json& v = s.raw("expect");
    if (!v.is_array()) Section::fail(s.sub("expect"), "expected an array");
    for (const json& e : v) {
      Section es(e, s.sub("expect"));
      HarnessSpec::Expect x;
      x.k = es.positive("k_per_m", 0.0);
      x.dominant = es.str("dominant", "");
      if (x.dominant != "reflected" && x.dominant != "transmitted")
        Section::fail(es.sub("dominant"), "expected reflected or transmitted");
      es.finish();
      h.expect.push_back(x);
    }
  }
  if (s.has("min_slope")) h.min_slope = s.num("min_slope");
  if (s.has("max_final_rel_linf")) h.max_final_rel_linf = s.positive("max_final_rel_linf", 1.0);
  h.require_decreasing = s.boolean("require_decreasing", h.require_decreasing);
  s.finish();
  return h;
}

json harness_json(const HarnessSpec& h) {
  json j = {{"kind", h.kind}};
  if (!h.hs_m.empty()) j["hs_m"] = h.hs_m;
  if (h.kind == "quadrature_convergence") {
    if (h.params)
      j["params"] = {{"alpha0", h.params->alpha0},
                     {"beta0", point_json({h.params->beta0.real(), h.params->beta0.imag()})},
                     {"gamma", h.params->gamma},
                     {"nu", h.params->nu}};
    j["density_sigma_m"] = h.density_sigma_m;
    j["density_center_m"] = point_json(h.density_center_m);
    if (!h.kernels.empty()) j["kernels"] = h.kernels;
  }
  if (!h.k_values_per_m.empty()) j["k_values_per_m"] = h.k_values_per_m;
  if (h.k_min_per_m > 0.0 || h.k_max_per_m < 1e300) j["k_range_per_m"] = point_json({h.k_min_per_m, h.k_max_per_m});
  if (!h.expect.empty()) {
    json e = json::array();
    for (const auto& x : h.expect) e.push_back({{"k_per_m", x.k}, {"dominant", x.dominant}});
    j["expect"] = e;
  }
  if (h.min_slope) j["min_slope"] = *h.min_slope;
  if (h.max_final_rel_linf) j["max_final_rel_linf"] = *h.max_final_rel_linf;
  j["require_decreasing"] = h.require_decreasing;
  return j;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"k", "incident.k_per_m"},         {"h", "grid.h_m"},
      {"omega", "frequency"},            {"hz", "frequency"},
      {"seed", "profile.seed"},          {"tol", "solver.rel_tolerance"},
      {"half_width", "grid.half_width_m"}};
  return m;
}

}  // namespace

RunConfig parse_config(const json& input) {
  const json* docp = &input;
  if (input.is_object() && input.contains("format") && input["format"] == "flexscat-meta") {
    if (!input.contains("config")) throw ConfigError("meta document without a config section");
    docp = &input["config"];
  }
  Section s(*docp, "");
  RunConfig c;
  c.description = s.str("description", "");

  if (s.has("ice")) {
    Section i = s.child("ice");
    c.ice.youngs_modulus = i.positive("youngs_modulus_pa", c.ice.youngs_modulus);
    c.ice.poisson = i.num("poisson", c.ice.poisson);
    c.ice.rho_ice = i.positive("rho_ice_kg_per_m3", c.ice.rho_ice);
    c.ice.rho_sea = i.positive("rho_sea_kg_per_m3", c.ice.rho_sea);
    c.ice.g = i.positive("g_m_per_s2", c.ice.g);
    i.finish();
  }
  if (!(c.ice.rho_sea > c.ice.rho_ice)) throw ConfigError("ice: rho_sea_kg_per_m3 must exceed rho_ice_kg_per_m3");

  if (s.has("frequency")) {
    Section f = s.child("frequency");
    int n = 0;
    if (f.has("omega_rad_per_s")) c.frequency_mode = FrequencyMode::omega, c.frequency_value = f.positive("omega_rad_per_s", 1), ++n;
    if (f.has("frequency_hz")) c.frequency_mode = FrequencyMode::hertz, c.frequency_value = f.positive("frequency_hz", 1), ++n;
    if (f.has("match_k")) {
      if (!f.boolean("match_k", true)) Section::fail("frequency.match_k", "only true is meaningful");
      c.frequency_mode = FrequencyMode::match_k, ++n;
    }
    f.finish();
    if (n != 1) throw ConfigError("frequency: give exactly one of omega_rad_per_s, frequency_hz, match_k");
  }

  if (!s.has("profile")) throw ConfigError("profile: missing");
  c.profile = parse_profile(s.child("profile"), c.ridges_default);

  if (s.has("grid")) {
    Section g = s.child("grid");
    c.grid_h = g.positive("h_m", c.grid_h);
    c.grid_half_width = g.positive("half_width_m", c.grid_half_width);
    c.grid_center = g.point("center_m", c.grid_center);
    g.finish();
  }

  if (s.has("incident")) {
    Section i = s.child("incident");
    const std::string kind = i.str("kind", "plane_wave");
    if (kind == "plane_wave") {
      c.incident.kind = Incident::Kind::plane_wave;
      c.incident.direction = i.num("direction_rad", 0.0);
    } else if (kind == "point_source") {
      c.incident.kind = Incident::Kind::point_source;
      const Point2 p = i.point("source_m", {0.0, 0.0});
      c.incident.sx = p[0], c.incident.sy = p[1];
    } else {
      Section::fail("incident.kind", "expected plane_wave or point_source");
    }
    c.incident.k = i.num("k_per_m", 0.0);
    if (c.incident.k < 0.0) Section::fail("incident.k_per_m", "must be non-negative");
    i.finish();
  }
  if (c.frequency_mode == FrequencyMode::match_k && !(c.incident.k > 0.0))
    throw ConfigError("frequency.match_k needs incident.k_per_m > 0");

  if (s.has("solver")) {
    Section v = s.child("solver");
    c.solver.rel_tolerance = v.positive("rel_tolerance", c.solver.rel_tolerance);
    c.solver.max_iterations = v.integer("max_iterations", c.solver.max_iterations);
    c.solver.restart = v.integer("restart", c.solver.restart);
    v.finish();
    if (c.solver.max_iterations < 1) throw ConfigError("solver.max_iterations: must be >= 1");
    if (c.solver.restart < 0) throw ConfigError("solver.restart: must be >= 0");
  }
  if (s.has("quadrature")) {
    Section q = s.child("quadrature");
    c.order = q.integer("order", c.order);
    q.finish();
    if (c.order != 2 && c.order != 4 && c.order != 6) throw ConfigError("quadrature.order: expected 2, 4 or 6");
  }
  if (s.has("output")) {
    Section o = s.child("output");
    c.write_fields = o.boolean("write_fields", c.write_fields);
    c.pde_check = o.boolean("pde_check", c.pde_check);
    c.refine_factor = o.integer("refine_factor", c.refine_factor);
    c.residual_samples = o.points("residual_samples_m");
    o.finish();
    if (c.refine_factor < 1) throw ConfigError("output.refine_factor: must be >= 1");
  }
  if (s.has("probes")) {
    Section p = s.child("probes");
    c.probe_upstream = p.point("upstream_m");
    c.probe_downstream = p.point("downstream_m");
    p.finish();
  }
  if (s.has("harness")) c.harness = parse_harness(s.child("harness"));
  s.finish();
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  if (!c.description.empty()) j["description"] = c.description;
  j["ice"] = {{"youngs_modulus_pa", c.ice.youngs_modulus},
              {"poisson", c.ice.poisson},
              {"rho_ice_kg_per_m3", c.ice.rho_ice},
              {"rho_sea_kg_per_m3", c.ice.rho_sea},
              {"g_m_per_s2", c.ice.g}};
  switch (c.frequency_mode) {
    case FrequencyMode::omega: j["frequency"] = {{"omega_rad_per_s", c.frequency_value}}; break;
    case FrequencyMode::hertz: j["frequency"] = {{"frequency_hz", c.frequency_value}}; break;
    case FrequencyMode::match_k: j["frequency"] = {{"match_k", true}}; break;
  }
  j["profile"] = profile_json(c.profile, c.ridges_default);
  j["grid"] = {{"h_m", c.grid_h}, {"half_width_m", c.grid_half_width}, {"center_m", point_json(c.grid_center)}};
  json inc;
  if (c.incident.kind == Incident::Kind::plane_wave) {
    inc = {{"kind", "plane_wave"}, {"direction_rad", c.incident.direction}};
  } else {
    inc = {{"kind", "point_source"}, {"source_m", point_json({c.incident.sx, c.incident.sy})}};
  }
  inc["k_per_m"] = c.incident.k;
  j["incident"] = inc;
  j["solver"] = {{"rel_tolerance", c.solver.rel_tolerance},
                 {"max_iterations", c.solver.max_iterations},
                 {"restart", c.solver.restart}};
  j["quadrature"] = {{"order", c.order}};
  json out = {{"write_fields", c.write_fields}, {"pde_check", c.pde_check}, {"refine_factor", c.refine_factor}};
  if (!c.residual_samples.empty()) {
    json pts = json::array();
    for (const Point2& p : c.residual_samples) pts.push_back(point_json(p));
    out["residual_samples_m"] = pts;
  }
  j["output"] = out;
  if (c.probe_upstream && c.probe_downstream)
    j["probes"] = {{"upstream_m", point_json(*c.probe_upstream)}, {"downstream_m", point_json(*c.probe_downstream)}};
  if (!c.harness.kind.empty() || !c.harness.hs_m.empty() || !c.harness.k_values_per_m.empty())
    j["harness"] = harness_json(c.harness);
  return j;
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "': expected key=value");
  std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  if (key == "omega" || key == "hz") {
    if (!value.is_number()) throw ConfigError("override " + key + ": expected a number");
    doc["frequency"] = json{{key == "omega" ? "omega_rad_per_s" : "frequency_hz", value}};
    return;
  }
  if (auto it = aliases().find(key); it != aliases().end()) key = it->second;

  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("override '" + assignment + "': empty path component");
    if (!node->is_object()) throw ConfigError("override '" + assignment + "': " + part + " is not inside an object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "'");
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw ConfigError(path + ": not valid JSON");
  if (doc.is_object() && doc.contains("format") && doc["format"] == "flexscat-meta") {
    if (!doc.contains("config")) throw ConfigError(path + ": meta document without a config section");
    json inner = doc["config"];
    doc = std::move(inner);
  }
  for (const std::string& o : overrides) apply_override(doc, o);
  return parse_config(doc);
}

Grid make_grid(const RunConfig& cfg, double h) {
  Grid g = square_grid(h, cfg.grid_half_width);
  g.x0 = cfg.grid_center[0], g.y0 = cfg.grid_center[1];
  return g;
}

ScatterProblem make_problem(const RunConfig& cfg) {
  ScatterProblem p;
  p.ice = cfg.ice;
  switch (cfg.frequency_mode) {
    case FrequencyMode::omega: p.ice.omega = cfg.frequency_value; break;
    case FrequencyMode::hertz: p.ice.omega = 2.0 * std::numbers::pi * cfg.frequency_value; break;
    case FrequencyMode::match_k:
      p.ice.omega = omega_for_wavenumber(cfg.ice, background_thickness(cfg.profile, cfg.ice), cfg.incident.k);
      break;
  }
  p.profile = cfg.profile;
  p.grid = make_grid(cfg, cfg.grid_h);
  // fix the calibrated spiral depth on the configured grid so that other
  // spacings and evaluation grids see the same profile
  if (auto* sp = std::get_if<Spiral>(&p.profile); sp && sp->calibrate_min > 0.0) {
    sp->amplitude = spiral_calibrated_amplitude(*sp, p.ice, p.grid);
    sp->calibrate_min = 0.0;
  }
  p.incident = cfg.incident;
  // a point source takes k from the dispersion relation
  if (p.incident.kind == Incident::Kind::point_source) p.incident.k = 0.0;
  p.solver = cfg.solver;
  p.order = cfg.order;
  return p;
}

}  // namespace flexscat::app
