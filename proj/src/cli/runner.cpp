#include "lorentz/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lorentz/hyplab.hpp"
#include "lorentz/oracles.hpp"
#include "lorentz/validate.hpp"

namespace lorentz {

using Json = nlohmann::ordered_json;

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  const auto mesh_eq = [](const Mesh& p, const Mesh& q) {
    return p.k == q.k && p.margin == q.margin && p.d == q.d && p.node_budget == q.node_budget &&
           p.reach_budget == q.reach_budget && p.seed == q.seed;
  };
  return a.version == b.version && a.experiment == b.experiment && a.domain == b.domain && a.pairs == b.pairs &&
         mesh_eq(a.mesh, b.mesh) && a.qh_h == b.qh_h && a.sampler == b.sampler && a.teeth == b.teeth &&
         a.seed == b.seed && a.level == b.level && a.outputs == b.outputs;
}

// ---- strict JSON reading ----

namespace {

const std::set<std::string> kExperiments{"distance", "compare", "hyperbolicity", "acausality", "thinness", "validate"};

void only_keys(const Json& j, const std::string& where, const std::set<std::string>& allowed) {
  if (!j.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [k, v] : j.items())
    if (!allowed.count(k)) throw ConfigError(where + ": unknown field '" + k + "'");
}

template <class T>
void read(const Json& j, const char* key, T& out, const std::string& where) {
  if (!j.contains(key)) return;
  try {
    const Json& v = j.at(key);
    if constexpr (std::is_same_v<T, int> || std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
    }
    out = v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(where + "." + key + ": " + e.what());
  }
}

std::vector<double> read_coords(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (const Json& x : v) {
    if (!x.is_number()) throw ConfigError(where + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

void read_coords(const Json& j, const char* key, std::vector<double>& out, const std::string& where) {
  if (j.contains(key)) out = read_coords(j.at(key), where + "." + key);
}

DomainSpec read_domain(const Json& j) {
  only_keys(j, "domain", {"type", "dim", "a", "b", "apex", "origin", "normal", "center", "eps", "h", "radius", "l"});
  DomainSpec d;
  read(j, "type", d.type, "domain");
  if (d.type.empty()) throw ConfigError("domain.type is required");
  read(j, "dim", d.dim, "domain");
  read_coords(j, "a", d.a, "domain");
  read_coords(j, "b", d.b, "domain");
  read_coords(j, "apex", d.apex, "domain");
  read_coords(j, "origin", d.origin, "domain");
  read_coords(j, "normal", d.normal, "domain");
  read_coords(j, "center", d.center, "domain");
  read(j, "eps", d.eps, "domain");
  read(j, "h", d.h, "domain");
  read(j, "radius", d.radius, "domain");
  read(j, "l", d.l, "domain");
  return d;
}

Mesh read_mesh(const Json& j) {
  only_keys(j, "mesh", {"k", "margin", "d", "node_budget", "reach_budget", "seed"});
  Mesh m;
  read(j, "k", m.k, "mesh");
  read(j, "margin", m.margin, "mesh");
  read(j, "d", m.d, "mesh");
  read(j, "node_budget", m.node_budget, "mesh");
  read(j, "reach_budget", m.reach_budget, "mesh");
  read(j, "seed", m.seed, "mesh");
  if (m.k < 1 || m.margin < 0 || m.d < 1 || m.node_budget < 2) throw ConfigError("mesh: parameters out of range");
  return m;
}

SamplerConfig read_sampler(const Json& j) {
  only_keys(j, "sampler", {"scales", "quadruples", "pool", "rho_div", "r_mul", "power", "center"});
  SamplerConfig s;
  read_coords(j, "scales", s.scales, "sampler");
  read(j, "quadruples", s.quadruples, "sampler");
  read(j, "pool", s.pool, "sampler");
  read(j, "rho_div", s.rho_div, "sampler");
  read(j, "r_mul", s.r_mul, "sampler");
  read(j, "power", s.power, "sampler");
  read_coords(j, "center", s.center, "sampler");
  if (s.scales.size() < 2 || s.quadruples < 1 || s.pool < 4 || s.rho_div <= 0 || s.r_mul <= 0)
    throw ConfigError("sampler: parameters out of range");
  return s;
}

Json coords_json(const std::vector<double>& v) { return Json(v); }

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  only_keys(j, "config",
            {"version", "experiment", "domain", "pairs", "mesh", "qh_h", "sampler", "teeth", "seed", "level",
             "outputs"});
  ExperimentConfig c;
  if (!j.contains("version")) throw ConfigError("config: missing version");
  read(j, "version", c.version, "config");
  if (c.version != 1) throw ConfigError("config: unsupported version " + std::to_string(c.version));
  read(j, "experiment", c.experiment, "config");
  if (!kExperiments.count(c.experiment)) throw ConfigError("config: unknown experiment '" + c.experiment + "'");
  if (j.contains("domain")) c.domain = read_domain(j.at("domain"));
  else if (c.experiment != "validate") throw ConfigError("config: missing domain");
  if (j.contains("pairs")) {
    const Json& p = j.at("pairs");
    if (!p.is_array()) throw ConfigError("pairs: expected an array");
    for (const Json& pair : p) {
      if (!pair.is_array() || pair.size() != 2) throw ConfigError("pairs: each entry is [x, y]");
      c.pairs.push_back({read_coords(pair[0], "pairs"), read_coords(pair[1], "pairs")});
    }
  }
  if (j.contains("mesh")) c.mesh = read_mesh(j.at("mesh"));
  read(j, "qh_h", c.qh_h, "config");
  if (j.contains("sampler")) c.sampler = read_sampler(j.at("sampler"));
  read(j, "teeth", c.teeth, "config");
  read(j, "seed", c.seed, "config");
  read(j, "level", c.level, "config");
  if (c.level != "fast" && c.level != "full") throw ConfigError("config: level must be fast or full");
  if (!j.contains("outputs")) throw ConfigError("config: missing outputs");
  const Json& o = j.at("outputs");
  only_keys(o, "outputs", {"csv", "svg"});
  read(o, "csv", c.outputs.csv, "outputs");
  read(o, "svg", c.outputs.svg, "outputs");
  if (c.outputs.csv.empty()) throw ConfigError("outputs.csv is required");
  if (c.qh_h <= 0 || c.teeth < 1) throw ConfigError("config: parameters out of range");
  return c;
}

std::string serialize_config(const ExperimentConfig& c) {
  Json j;
  j["version"] = c.version;
  j["experiment"] = c.experiment;
  if (!c.domain.type.empty()) {
    Json d;
    d["type"] = c.domain.type;
    d["dim"] = c.domain.dim;
    for (const auto& [key, v] : {std::pair{"a", &c.domain.a}, {"b", &c.domain.b}, {"apex", &c.domain.apex},
                                 {"origin", &c.domain.origin}, {"normal", &c.domain.normal},
                                 {"center", &c.domain.center}})
      if (!v->empty()) d[key] = coords_json(*v);
    d["eps"] = c.domain.eps;
    d["h"] = c.domain.h;
    d["radius"] = c.domain.radius;
    d["l"] = c.domain.l;
    j["domain"] = d;
  }
  Json pairs = Json::array();
  for (const auto& p : c.pairs) pairs.push_back(Json::array({coords_json(p[0]), coords_json(p[1])}));
  j["pairs"] = pairs;
  j["mesh"] = {{"k", c.mesh.k},
               {"margin", c.mesh.margin},
               {"d", c.mesh.d},
               {"node_budget", c.mesh.node_budget},
               {"reach_budget", c.mesh.reach_budget},
               {"seed", c.mesh.seed}};
  j["qh_h"] = c.qh_h;
  Json s;
  s["scales"] = c.sampler.scales;
  s["quadruples"] = c.sampler.quadruples;
  s["pool"] = c.sampler.pool;
  s["rho_div"] = c.sampler.rho_div;
  s["r_mul"] = c.sampler.r_mul;
  s["power"] = c.sampler.power;
  if (!c.sampler.center.empty()) s["center"] = c.sampler.center;
  j["sampler"] = s;
  j["teeth"] = c.teeth;
  j["seed"] = c.seed;
  j["level"] = c.level;
  j["outputs"] = {{"csv", c.outputs.csv}, {"svg", c.outputs.svg}};
  return j.dump(2);
}

// ---- domains ----

namespace {

Event event_of(const std::vector<double>& v, int dim, const std::string& what) {
  if (v.empty()) throw DomainError(what + " is required");
  if (static_cast<int>(v.size()) != dim) throw DomainError(what + " must have " + std::to_string(dim) + " coordinates");
  return Vec::from(v);
}

}  // namespace

std::unique_ptr<Domain> make_domain(const DomainSpec& s) {
  if (s.dim < 2 || s.dim > kMaxCoords) throw DomainError("domain.dim out of range");
  if (s.type == "ConeFuture") {
    const Event apex = s.apex.empty() ? Vec(s.dim) : event_of(s.apex, s.dim, "apex");
    return std::make_unique<ConeFuture>(apex, s.eps);
  }
  if (s.type == "HalfSpaceFuture") {
    if (s.origin.empty() && s.normal.empty()) return std::make_unique<HalfSpaceFuture>(s.dim);
    return std::make_unique<HalfSpaceFuture>(event_of(s.origin, s.dim, "origin"), event_of(s.normal, s.dim, "normal"));
  }
  if (s.type == "Diamond")
    return std::make_unique<Diamond>(event_of(s.a, s.dim, "a"), event_of(s.b, s.dim, "b"), s.eps);
  if (s.type == "StableConeComplement") return std::make_unique<StableConeComplement>(s.dim, s.eps);
  if (s.type == "SpacelikeSlab") return std::make_unique<SpacelikeSlab>(s.dim, s.h);
  if (s.type == "Bonsante") return std::make_unique<Bonsante>(s.dim, s.l);
  if (s.type == "EuclideanBall")
    return std::make_unique<EuclideanBall>(event_of(s.center, s.dim, "center"), s.radius);
  throw DomainError("unknown domain type '" + s.type + "'");
}

// ---- CSV ----

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string coords(const Event& e) {
  std::string s;
  for (int i = 0; i < e.size(); ++i) s += (i ? ";" : "") + num(e[i]);
  return s;
}

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return q + "\"";
}

}  // namespace

std::string csv_header() { return "experiment,domain,metric,kind,x,y,z,w,value,mesh,seed,wall_ms"; }

std::string csv_line(const ResultRow& r) {
  std::string s = quote(r.experiment) + ',' + quote(r.domain) + ',' + quote(r.metric) + ',' + quote(r.kind);
  for (int i = 0; i < 4; ++i) s += ',' + (i < static_cast<int>(r.points.size()) ? coords(r.points[i]) : "");
  s += ',' + num(r.value) + ',' + quote(r.mesh) + ',' + std::to_string(r.seed) + ',' + num(std::round(r.wall_ms * 1000) / 1000);
  return s;
}

// ---- experiments ----

namespace {

using Clock = std::chrono::steady_clock;

struct Runner {
  const ExperimentConfig& c;
  const Domain& dom;
  RunResult out;
  std::vector<std::vector<Event>> polylines;  // for SVG
  std::vector<Event> marks;

  Mesh mesh() const {
    Mesh m = c.mesh;
    m.seed = c.seed;
    return m;
  }

  void row(const std::string& metric, const std::string& kind, std::vector<Event> pts, double value,
           const std::string& mesh_str, Clock::time_point start) {
    ResultRow r;
    r.experiment = c.experiment;
    r.domain = dom.name();
    r.metric = metric;
    r.kind = kind;
    r.points = std::move(pts);
    r.value = value;
    r.mesh = mesh_str;
    r.seed = c.seed;
    r.wall_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
    out.rows.push_back(std::move(r));
  }

  std::vector<std::pair<Event, Event>> pairs() const {
    std::vector<std::pair<Event, Event>> p;
    for (const auto& [x, y] : c.pairs) {
      const Event ex = event_of(x, dom.size(), "pair point"), ey = event_of(y, dom.size(), "pair point");
      if (!dom.contains(ex) || !dom.contains(ey)) throw DomainError("pair point outside " + dom.name());
      p.emplace_back(ex, ey);
    }
    if (p.empty()) throw ConfigError(c.experiment + ": pairs are required");
    return p;
  }

  void exact_row(const Event& x, const Event& y) {
    const auto f = exact_formula(dom);
    if (!f || !f->applicable(x, y)) return;
    const auto t0 = Clock::now();
    row("markowitz", "exact", {x, y}, f->evaluate(x, y), f->variant, t0);
  }

  void markowitz_rows(const Event& x, const Event& y) {
    auto t0 = Clock::now();
    const DistanceEstimate up = markowitz_upper(dom, x, y, mesh());
    row("markowitz", "upper", {x, y}, up.value, up.mesh.str(), t0);
    if (up.chain) polylines.push_back(up.chain->vertices);
    t0 = Clock::now();
    const DistanceEstimate lo = markowitz_lower(dom, x, y);
    row("markowitz", "lower", {x, y}, lo.value, lo.witness, t0);
  }

  void distance() {
    for (const auto& [x, y] : pairs()) {
      exact_row(x, y);
      markowitz_rows(x, y);
      marks.push_back(x);
      marks.push_back(y);
    }
  }

  void compare() {
    for (const auto& [x, y] : pairs()) {
      exact_row(x, y);
      markowitz_rows(x, y);
      auto t0 = Clock::now();
      QhGrid g;
      g.h = c.qh_h;
      const DistanceEstimate k = quasi_hyperbolic_distance(dom, x, y, g);
      row("quasi_hyperbolic", "upper", {x, y}, k.value, "h=" + num(c.qh_h), t0);
      const DomainFlags fl = dom.flags();
      if (fl.future_complete || fl.bounded) {
        t0 = Clock::now();
        const TimeFunction tau = fl.future_complete ? log_cosmological_time(dom) : log_time_ratio(dom);
        const DistanceEstimate nd = null_distance(dom, tau, x, y, mesh());
        row("null_distance_" + tau.name, to_string(nd.kind), {x, y}, nd.value, nd.mesh.str(), t0);
      }
      if (fl.convex) {
        t0 = Clock::now();
        row("hilbert", "exact", {x, y}, hilbert_distance(dom, x, y), "", t0);
      }
      marks.push_back(x);
      marks.push_back(y);
    }
  }

  void hyperbolicity() {
    SamplerSpec spec;
    spec.scales = c.sampler.scales;
    spec.quadruples = c.sampler.quadruples;
    spec.pool = c.sampler.pool;
    spec.seed = c.seed;
    spec.family.center = c.sampler.center.empty() ? dom.center() : event_of(c.sampler.center, dom.size(), "sampler.center");
    spec.family.d0 = dom.scale();
    spec.family.rho_div = c.sampler.rho_div;
    spec.family.r_mul = c.sampler.r_mul;
    spec.family.power = c.sampler.power;
    const auto t0 = Clock::now();
    const HyperbolicityReport r = hyperbolicity_series(dom, default_evaluator_factory(dom), spec);
    const std::string fp = "pool=" + std::to_string(spec.pool) + " q=" + std::to_string(spec.quadruples) +
                           " rho_div=" + num(spec.family.rho_div) + " power=" + num(spec.family.power);
    for (const auto& [s, d] : r.series) row("delta_hat@" + num(s), "estimate", {}, d, fp, t0);
    row("delta_hat", "estimate", {r.worst.begin(), r.worst.end()}, r.delta_hat, fp, t0);
    row("growth_ratio:" + to_string(classify_growth(r.series)), "estimate", {}, growth_ratio(r.series), fp, t0);
    for (const Event& e : r.worst) marks.push_back(e);
  }

  void acausality() {
    const auto t0 = Clock::now();
    const CausalBoundary cb = causal_boundary(dom);
    const Box base = cb.graphs.base;
    const auto sample_graph = [&](const SpatialFn& f) {
      std::vector<Event> pts;
      Rng rng(c.seed);
      std::uniform_real_distribution<double> u(0, 1);
      for (int i = 0; i < 2000; ++i) {
        Event p(dom.size());
        for (int k = 1; k < dom.size(); ++k) {
          const double lo = std::isfinite(base.lo[k]) ? base.lo[k] : -4.0;
          const double hi = std::isfinite(base.hi[k]) ? base.hi[k] : 4.0;
          p[k] = lo + (hi - lo) * u(rng);
        }
        p[0] = f(p);
        if (std::isfinite(p[0])) pts.push_back(p);
      }
      return pts;
    };
    for (const auto& [name, has, f] : {std::tuple{"past", cb.has_past, cb.graphs.lower},
                                       std::tuple{"future", cb.has_future, cb.graphs.upper}}) {
      if (!has) continue;
      const AcausalityReport r = stable_acausality_epsilon(sample_graph(f));
      const char* kind = r.kind == AcausalityReport::Kind::stable       ? "stable"
                         : r.kind == AcausalityReport::Kind::not_stable ? "not_stable"
                                                                        : "every_epsilon";
      row(std::string("stable_epsilon_") + name, kind, {}, r.epsilon, "samples=2000", t0);
      row(std::string("lipschitz_") + name, kind, {}, r.lipschitz, "samples=2000", t0);
    }
  }

  void thinness() {
    const auto ev = default_evaluator_factory(dom)(dom.sampling_box(), 0.01 * dom.scale());
    for (const auto& [x, y] : pairs()) {
      const auto t0 = Clock::now();
      const auto zig = zigzag_path(x, y, c.teeth);
      const auto axis = sample_segment(x, y);
      const double v = std::max(causal_thinness(*ev, zig, axis), causal_thinness(*ev, axis, zig));
      row("causal_thinness", "estimate", {x, y}, v, ev->name() + " teeth=" + std::to_string(c.teeth), t0);
      polylines.push_back(zig);
      polylines.push_back(axis);
    }
  }

  void run() {
    if (c.experiment == "distance") distance();
    else if (c.experiment == "compare") compare();
    else if (c.experiment == "hyperbolicity") hyperbolicity();
    else if (c.experiment == "acausality") acausality();
    else if (c.experiment == "thinness") thinness();
  }
};

std::string render_svg(const Domain& dom, const std::vector<std::vector<Event>>& lines, const std::vector<Event>& marks) {
  Box view = dom.sampling_box();
  for (int i = 0; i < 2; ++i) {
    view.lo[i] = std::max(view.lo[i], -4.0);
    view.hi[i] = std::min(view.hi[i], 4.0);
  }
  const double w = view.hi[1] - view.lo[1], h = view.hi[0] - view.lo[0];
  const double px = 600.0 / std::max(w, h);
  const auto xy = [&](const Event& e) {
    return num((e[1] - view.lo[1]) * px) + "," + num((view.hi[0] - e[0]) * px);
  };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w * px) << "\" height=\"" << num(h * px)
    << "\">\n";
  // Boundary from rays out of the center.
  const Event c = dom.center();
  std::string boundary;
  for (int k = 0; k <= 720; ++k) {
    const double a = 2 * M_PI * k / 720;
    const Vec dir{std::sin(a), std::cos(a)};
    const RayExit e = dom.exit(c, dir);
    const double reach = std::isfinite(e.param) ? std::min(e.param, 16.0) : 16.0;
    Event p = c + reach * dir;
    for (int i = 0; i < 2; ++i) p[i] = std::clamp(p[i], view.lo[i], view.hi[i]);
    boundary += xy(p) + " ";
  }
  s << "<polygon points=\"" << boundary << "\" fill=\"#eef\" stroke=\"#335\" stroke-width=\"1\"/>\n";
  for (const auto& l : lines) {
    s << "<polyline points=\"";
    for (const Event& e : l) s << xy(e) << ' ';
    s << "\" fill=\"none\" stroke=\"#c33\" stroke-width=\"1\"/>\n";
  }
  for (const Event& m : marks) {
    const std::string p = xy(m);
    const auto comma = p.find(',');
    s << "<circle cx=\"" << p.substr(0, comma) << "\" cy=\"" << p.substr(comma + 1) << "\" r=\"3\" fill=\"#222\"/>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& c) {
  if (c.experiment == "validate") {
    RunResult out;
    for (const CriterionResult& r : validate_suite(parse_level(c.level), c.seed)) {
      ResultRow row;
      row.experiment = "validate";
      row.domain = "-";
      row.metric = "criterion_" + std::to_string(r.id);
      row.kind = r.pass ? "pass" : "fail";
      row.value = r.margin;
      row.mesh = c.level;
      row.seed = c.seed;
      row.wall_ms = r.wall_s * 1000;
      out.rows.push_back(row);
      out.message += format_result(r) + "\n";
      if (!r.pass) out.exit_code = 1;
    }
    return out;
  }
  std::unique_ptr<Domain> dom;
  try {
    dom = make_domain(c.domain);
  } catch (const LorentzError& e) {
    RunResult out;
    out.exit_code = 3;
    out.message = e.what();
    return out;
  }
  Runner r{c, *dom, {}, {}, {}};
  try {
    r.run();
  } catch (const ConfigError& e) {
    r.out.exit_code = 2;
    r.out.message = e.what();
    r.out.rows.clear();
    return r.out;
  } catch (const SolverError& e) {
    r.out.exit_code = 4;
    r.out.message = e.what();
    r.row("solver_failure", "error", {}, std::nan(""), "", Clock::now());
    return r.out;
  } catch (const LorentzError& e) {
    r.out.exit_code = 3;
    r.out.message = e.what();
    r.row("domain_failure", "error", {}, std::nan(""), "", Clock::now());
    return r.out;
  }
  if (!c.outputs.svg.empty() && dom->size() == 2) r.out.svg = render_svg(*dom, r.polylines, r.marks);
  return r.out;
}

int run_config_file(const std::string& path, const std::string& out_dir, const std::optional<std::uint64_t>& seed,
                    const std::string& expected, std::string* message) {
  const auto fail = [&](int code, const std::string& m) {
    if (message) *message = m;
    return code;
  };
  ExperimentConfig c;
  try {
    std::ifstream in(path);
    if (!in) return fail(2, "cannot read config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    c = parse_config(ss.str());
  } catch (const ConfigError& e) {
    return fail(2, e.what());
  }
  if (!expected.empty() && c.experiment != expected)
    return fail(2, "config experiment '" + c.experiment + "' does not match subcommand '" + expected + "'");
  if (seed) c.seed = *seed;
  const RunResult r = run_experiment(c);
  if (r.exit_code == 2) return fail(2, r.message);
  namespace fs = std::filesystem;
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);
  fs::create_directories(dir);
  {
    std::ofstream csv(dir / c.outputs.csv);
    csv << csv_header() << '\n';
    for (const ResultRow& row : r.rows) csv << csv_line(row) << '\n';
  }
  if (!r.svg.empty()) std::ofstream(dir / c.outputs.svg) << r.svg;
  return fail(r.exit_code, r.message);
}

}  // namespace lorentz
