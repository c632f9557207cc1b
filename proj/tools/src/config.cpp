#include "config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "nlsgs/errors.hpp"
#include "nlsgs/io.hpp"

namespace nlsgs::cli {

namespace {

using nlohmann::json;

// Reads one object; the schema node lists the keys it may contain.
class Section {
 public:
  Section(const json& j, std::string path, const json& schema) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("", "expected an object");
    for (const auto& [k, _] : schema.at("properties").items()) allowed_.insert(k);
    for (const auto& [k, _] : j_.items())
      if (!allowed_.count(k)) throw ConfigError("unknown config key " + key(k));
  }

  bool has(const std::string& k) const { return j_.contains(k); }
  std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  const json& raw(const std::string& k) const { return j_.at(k); }

  double number(const std::string& k, double def) const {
    if (!has(k)) return def;
    return number(k);
  }
  double number(const std::string& k) const {
    require(k);
    const auto& v = j_.at(k);
    if (!v.is_number()) fail(k, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(k, "must be finite");
    return x;
  }
  long integer(const std::string& k, long def) const {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_number_integer()) fail(k, "expected an integer");
    return v.get<long>();
  }
  bool boolean(const std::string& k, bool def) const {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_boolean()) fail(k, "expected true or false");
    return v.get<bool>();
  }
  std::string string(const std::string& k, const std::string& def) const {
    if (!has(k)) return def;
    const auto& v = j_.at(k);
    if (!v.is_string()) fail(k, "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const std::string& k) const {
    std::vector<double> out;
    if (!has(k)) return out;
    const auto& v = j_.at(k);
    if (!v.is_array()) fail(k, "expected an array of numbers");
    for (const auto& x : v) {
      if (!x.is_number()) fail(k, "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }
  std::vector<std::vector<double>> number_lists(const std::string& k) const {
    std::vector<std::vector<double>> out;
    if (!has(k)) return out;
    const auto& v = j_.at(k);
    if (!v.is_array()) fail(k, "expected an array of arrays");
    for (const auto& row : v) {
      if (!row.is_array()) fail(k, "expected an array of arrays");
      std::vector<double> r;
      for (const auto& x : row) {
        if (!x.is_number()) fail(k, "expected numbers");
        r.push_back(x.get<double>());
      }
      out.push_back(std::move(r));
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& k, const std::string& what) const {
    throw ConfigError("config key " + (k.empty() ? path_ : key(k)) + ": " + what);
  }
  void require(const std::string& k) const {
    if (!has(k)) throw ConfigError("missing config key " + key(k));
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> allowed_;
};

const json& props(const json& s, const std::string& k) { return s.at("properties").at(k); }

Potential parse_potential(const Section& p, const json& schema, const std::string& path) {
  const std::string kind = p.string("kind", "");
  if (kind.empty()) p.require("kind");
  // Keys each kind accepts, beyond "kind".
  static const std::map<std::string, std::set<std::string>> keys = {
      {"zero", {}},
      {"delta", {"sites"}},
      {"well", {"depth", "interval", "radius"}},
      {"inverse_power", {"gamma", "sigma"}},
      {"gaussian", {"depth"}},
      {"double_well", {"center", "depth"}},
      {"cosine_gaussian", {"depth", "kappa"}},
  };
  const auto it = keys.find(kind);
  if (it == keys.end()) p.fail("kind", "unknown potential kind '" + kind + "'");
  for (const auto& [k, _] : schema.at("properties").items())
    if (k != "kind" && p.has(k) && !it->second.count(k))
      throw ConfigError("config key " + p.key(k) + " does not apply to potential kind " + kind);

  if (kind == "zero") return ZeroPotential{};
  if (kind == "delta") {
    DeltaSum d;
    p.require("sites");
    const auto& arr = p.raw("sites");
    if (!arr.is_array() || arr.empty()) p.fail("sites", "expected a non-empty array");
    const json& site_schema = props(schema, "sites").at("items");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Section s(arr[i], path + ".sites[" + std::to_string(i) + "]", site_schema);
      d.sites.push_back(DeltaSite{s.number("center", 0.0), s.number("strength")});
    }
    return d;
  }
  if (kind == "well") {
    FiniteWell w;
    w.depth = p.number("depth");
    if (p.has("interval") == p.has("radius"))
      p.fail("interval", "give exactly one of interval or radius");
    if (p.has("interval")) {
      const auto iv = p.numbers("interval");
      if (iv.size() != 2) p.fail("interval", "expected [lo, hi]");
      w.region = WellInterval{iv[0], iv[1]};
    } else {
      w.region = WellBall{p.number("radius")};
    }
    return w;
  }
  if (kind == "inverse_power") return InversePower{p.number("gamma", 1.0), p.number("sigma")};
  if (kind == "gaussian") return GaussianWell{p.number("depth", 1.0)};
  if (kind == "double_well") return DoubleWellGaussian{p.number("center"), p.number("depth", 1.0)};
  return TrappedCosineGaussian{p.number("depth", 2.0), p.number("kappa", 0.5)};
}

std::size_t positive_count(const Section& s, const std::string& k, std::size_t def) {
  const long v = s.integer(k, static_cast<long>(def));
  if (v < 1) s.fail(k, "must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

RunConfig parse_config(const json& j) {
  const json& schema = config_schema();
  RunConfig cfg;
  cfg.raw = j;
  Section top(j, "", schema);

  // problem (compare runs fix their own problem)
  if (!top.has("problem") || !top.has("discretization")) {
    if (top.has("problem") || top.has("discretization"))
      top.require(top.has("problem") ? "discretization" : "problem");
    cfg.has_problem = false;
  }
  const json& ps = props(schema, "problem");
  const json empty_problem = {{"potential", {{"kind", "zero"}}}};
  const json empty_disc = json::object();
  Section p(cfg.has_problem ? top.raw("problem") : empty_problem, "problem", ps);
  auto& pr = cfg.problem;
  pr.alpha = p.number("alpha", 1.0);
  pr.omega = p.number("omega", 1.0);
  pr.dim = static_cast<int>(p.integer("dim", 1));
  pr.geometry = geometry_from_string(p.string("geometry", "full"));
  if (p.has("domain")) {
    pr.box.clear();
    for (const auto& iv : p.number_lists("domain")) {
      if (iv.size() != 2) p.fail("domain", "each interval is [a, b]");
      pr.box.push_back(Interval{iv[0], iv[1]});
    }
  } else if (pr.geometry == Geometry::Tensor2D) {
    pr.box = {Interval{-16.0, 16.0}, Interval{-16.0, 16.0}};
  }
  pr.radius = p.number("radius", 16.0);
  p.require("potential");
  Section pot(p.raw("potential"), "problem.potential", props(ps, "potential"));
  pr.potential = parse_potential(pot, props(ps, "potential"), "problem.potential");

  // discretization
  Section d(cfg.has_problem ? top.raw("discretization") : empty_disc, "discretization",
            props(schema, "discretization"));
  auto& ds = cfg.discretization;
  ds.method = method_from_string(d.string("kind", "sp"));
  ds.h = d.number("h", 1.0 / 16.0);
  if (!(ds.h > 0.0)) d.fail("h", "must be > 0");
  ds.fe_order = static_cast<int>(d.integer("fe_order", 1));
  ds.lumped = d.boolean("lumped", false);

  // flow
  if (top.has("flow")) {
    Section f(top.raw("flow"), "flow", props(schema, "flow"));
    auto& fl = cfg.flow;
    fl.scheme = scheme_from_string(f.string("scheme", "bf"));
    fl.tau = f.number("tau", 1.0);
    fl.epsilon = f.number("epsilon", 1e-9);
    fl.stop_norm = stop_norm_from_string(f.string("stop_norm", "max"));
    fl.max_iters = positive_count(f, "max_iters", 100000);
    fl.record_history = f.boolean("record_history", false);
    pr.theta = f.number("theta", 0.0);
  }
  validate(cfg.flow);
  validate(cfg.problem);

  // seed
  if (top.has("seed")) {
    Section s(top.raw("seed"), "seed", props(schema, "seed"));
    cfg.seed.kind = s.string("kind", "gaussian");
    if (cfg.seed.kind != "gaussian" && cfg.seed.kind != "file" && cfg.seed.kind != "exact")
      s.fail("kind", "expected gaussian | file | exact");
    cfg.seed.shift = s.numbers("shift");
    cfg.seed.path = s.string("path", "");
    if (cfg.seed.kind == "file" && cfg.seed.path.empty()) s.require("path");
    if (!cfg.seed.shift.empty() && cfg.seed.shift.size() != pr.box.size() &&
        pr.geometry != Geometry::Radial)
      s.fail("shift", "needs one component per axis");
  }

  // outputs
  if (top.has("outputs")) {
    Section o(top.raw("outputs"), "outputs", props(schema, "outputs"));
    cfg.outputs.directory = o.string("directory", "out");
    if (o.has("formats")) {
      const auto& f = o.raw("formats");
      if (!f.is_array()) o.fail("formats", "expected an array");
      cfg.outputs.csv = cfg.outputs.json = false;
      for (const auto& x : f) {
        const std::string s = x.is_string() ? x.get<std::string>() : "";
        if (s == "csv")
          cfg.outputs.csv = true;
        else if (s == "json")
          cfg.outputs.json = true;
        else
          o.fail("formats", "entries must be csv or json");
      }
    }
  }

  if (top.has("sweep")) {
    const json& ss = props(schema, "sweep");
    Section s(top.raw("sweep"), "sweep", ss);
    SweepConfig sw;
    sw.omegas = s.numbers("omegas");
    if (s.has("range")) {
      if (!sw.omegas.empty()) s.fail("range", "give either omegas or range");
      Section r(s.raw("range"), "sweep.range", props(ss, "range"));
      const double a = r.number("from"), b = r.number("to");
      const std::size_t n = positive_count(r, "count", 2);
      const std::string spacing = r.string("spacing", "linear");
      if (spacing != "linear" && spacing != "log") r.fail("spacing", "expected linear | log");
      if (spacing == "log" && !(a > 0.0 && b > 0.0)) r.fail("from", "log spacing needs from, to > 0");
      for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        sw.omegas.push_back(spacing == "log" ? a * std::pow(b / a, t) : a + t * (b - a));
      }
    }
    if (sw.omegas.empty()) s.fail("omegas", "needs omegas or range");
    sw.warm_start = s.boolean("warm_start", true);
    sw.seed_shifts = s.number_lists("seed_shifts");
    sw.margin = s.number("margin", 1e-3);
    if (s.has("omega0")) sw.omega0 = s.number("omega0");
    sw.write_fields = s.boolean("write_fields", false);
    sw.write_rescaled = s.boolean("write_rescaled", false);
    if (sw.write_rescaled && pr.geometry != Geometry::Full1D)
      s.fail("write_rescaled", "needs problem.geometry=full");
    cfg.sweep = sw;
  }

  if (top.has("compare")) {
    const json& cs = props(schema, "compare");
    Section c(top.raw("compare"), "compare", cs);
    CompareConfig cc;
    cc.case_id = static_cast<int>(c.integer("case", 1));
    if (cc.case_id < 1 || cc.case_id > 3) c.fail("case", "must be 1, 2 or 3");
    cc.max_iters = positive_count(c, "max_iters", 200000);
    c.require("runs");
    const auto& runs = c.raw("runs");
    if (!runs.is_array()) c.fail("runs", "expected an array");
    for (std::size_t i = 0; i < runs.size(); ++i) {
      Section r(runs[i], "compare.runs[" + std::to_string(i) + "]", cs.at("properties").at("runs").at("items"));
      ComparisonRequest req{scheme_from_string(r.string("scheme", "bf")), r.numbers("taus")};
      if (req.taus.empty()) r.fail("taus", "needs at least one value");
      for (double t : req.taus)
        if (!(t > 0.0)) r.fail("taus", "values must be > 0");
      cc.runs.push_back(std::move(req));
    }
    cfg.compare = cc;
  }

  if (top.has("converge")) {
    Section c(top.raw("converge"), "converge", props(schema, "converge"));
    ConvergeConfig cv;
    cv.h_list = c.numbers("h_list");
    if (cv.h_list.size() < 2) c.fail("h_list", "needs at least two spacings");
    for (double h : cv.h_list)
      if (!(h > 0.0)) c.fail("h_list", "spacings must be > 0");
    cv.reference = c.string("reference", "auto");
    if (cv.reference != "auto" && cv.reference != "exact" && cv.reference != "self")
      c.fail("reference", "expected auto | exact | self");
    cv.reference_h = c.number("reference_h", 0.0);
    cfg.converge = cv;
  }

  if (top.has("crosscheck")) {
    Section c(top.raw("crosscheck"), "crosscheck", props(schema, "crosscheck"));
    CrosscheckConfig cc;
    cc.masses = c.numbers("masses");
    if (cc.masses.empty()) c.fail("masses", "needs at least one mass");
    for (double m : cc.masses)
      if (!(m > 0.0)) c.fail("masses", "masses must be > 0");
    cc.energy_tau = c.number("energy_tau", 1.0);
    if (!(cc.energy_tau > 0.0)) c.fail("energy_tau", "must be > 0");
    cc.energy_epsilon = c.number("energy_epsilon", 1e-9);
    if (!(cc.energy_epsilon > 0.0)) c.fail("energy_epsilon", "must be > 0");
    cc.energy_max_iters = positive_count(c, "energy_max_iters", 100000);
    cc.stabilization = c.number("stabilization", 1.0);
    if (!(cc.stabilization >= 0.0)) c.fail("stabilization", "must be >= 0");
    cc.seed_shifts = c.number_lists("seed_shifts");
    cfg.crosscheck = cc;
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path);
  json j;
  try {
    j = json::parse(is, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

}  // namespace nlsgs::cli
