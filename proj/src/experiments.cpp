#include "ahlab/experiments.hpp"

#include "ahlab/acceptance.hpp"
#include "ahlab/curvature.hpp"
#include "ahlab/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <ostream>

#ifndef AHLAB_VERSION
#define AHLAB_VERSION "unknown"
#endif

namespace ahlab::cli {

namespace {

// ---------------------------------------------------------------------------
// Schema

using Check = std::function<std::optional<std::string>(const Json&)>;

struct Param {
  std::string name;
  Json fallback;
  Check check;
};

struct Schema {
  std::vector<Param> parameters;
  std::vector<Param> tolerances;
  std::uint64_t default_seed = 0;
};

std::optional<std::string> want_number(const Json& v) {
  if (!v.is_number()) return "must be a number";
  if (!std::isfinite(v.get<double>())) return "must be finite";
  return std::nullopt;
}

Check finite() { return want_number; }

Check positive() {
  return [](const Json& v) -> std::optional<std::string> {
    if (auto e = want_number(v)) return e;
    if (!(v.get<double>() > 0.0)) return "must be positive";
    return std::nullopt;
  };
}

Check nonnegative() {
  return [](const Json& v) -> std::optional<std::string> {
    if (auto e = want_number(v)) return e;
    if (v.get<double>() < 0.0) return "must be non-negative";
    return std::nullopt;
  };
}

Check in_range(double lo, double hi) {
  return [lo, hi](const Json& v) -> std::optional<std::string> {
    if (auto e = want_number(v)) return e;
    const double x = v.get<double>();
    if (x < lo || x > hi) {
      char buf[96];
      std::snprintf(buf, sizeof buf, "must lie in [%g, %g]", lo, hi);
      return std::string(buf);
    }
    return std::nullopt;
  };
}

Check integer_at_least(std::int64_t lo, std::int64_t hi = std::numeric_limits<std::int64_t>::max()) {
  return [lo, hi](const Json& v) -> std::optional<std::string> {
    if (!v.is_number_integer()) return "must be an integer";
    const std::int64_t x = v.get<std::int64_t>();
    if (x < lo || x > hi) return "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]";
    return std::nullopt;
  };
}

Check number_array(std::size_t size) {
  return [size](const Json& v) -> std::optional<std::string> {
    if (!v.is_array() || v.size() != size) return "must be an array of " + std::to_string(size) + " numbers";
    for (const auto& x : v) {
      if (want_number(x)) return "must be an array of " + std::to_string(size) + " finite numbers";
    }
    return std::nullopt;
  };
}

Check criteria_list() {
  return [](const Json& v) -> std::optional<std::string> {
    if (!v.is_array()) return "must be an array of criterion ids";
    for (const auto& x : v) {
      if (!x.is_number_integer() || x.get<int>() < 1 || x.get<int>() > kAcceptanceCriteria) {
        return "entries must be integers in [1, " + std::to_string(kAcceptanceCriteria) + "]";
      }
    }
    return std::nullopt;
  };
}

const std::map<std::string, Schema>& schemas() {
  static const std::map<std::string, Schema> s = [] {
    std::map<std::string, Schema> m;
    m["riccati"] = {{{"amplitude", 1.0, finite()},
                     {"frequency", 3.0, finite()},
                     {"envelope_constant", 1.0, nonnegative()},
                     {"lambda0", 3.0, positive()},
                     {"r1", 20.0, positive()},
                     {"samples", 512, integer_at_least(16)}},
                    {{"tol", 1e-12, positive()}},
                    0};
    m["shape-metric"] = {{{"n", 2, integer_at_least(1, 8)},
                          {"amplitude", 1.0, in_range(-0.5, 1e6)},
                          {"decay_rate", 1.5, positive()},
                          {"s0", 2.0, positive()},
                          {"r1", 25.0, positive()},
                          {"samples", 512, integer_at_least(16)}},
                         {{"tol", 1e-9, positive()}},
                         0};
    m["model-system"] = {{{"c", 1.0, positive()},
                          {"Omega", -0.5, finite()},
                          {"u0", 1.0, positive()},
                          {"v0", 1.0, positive()},
                          {"r1", 30.0, positive()},
                          {"cap", 1e30, positive()},
                          {"samples", 512, integer_at_least(16)}},
                         {{"tol", 1e-9, positive()}},
                         0};
    m["compare"] = {{{"instances", 200, integer_at_least(1)}, {"slack", 1e-9, nonnegative()}}, {}, 20240601};
    m["compactify"] = {{{"omega", 1.5, positive()},
                        {"y", Json::array({0.3, 0.0}), number_array(2)},
                        {"r1", 15.0, positive()},
                        {"rho_min", 1e-3, in_range(1e-12, 0.5)},
                        {"rho_samples", 25, integer_at_least(8)}},
                       {{"tol", 1e-10, positive()}},
                       0};
    m["counterexample-audit"] = {{{"rho_min", 1e-3, in_range(1e-12, 1.0)},
                                  {"rho_max", 1e-1, in_range(1e-12, 1.0)},
                                  {"per_decade", 24, integer_at_least(1)},
                                  {"y_samples", 64, integer_at_least(1)},
                                  {"step", 1e-3, in_range(1e-8, 1e-1)}},
                                 {{"quad_tol", 1e-10, positive()}},
                                 0};
    Json all = Json::array();
    for (int i = 1; i <= kAcceptanceCriteria; ++i) all.push_back(i);
    m["full-suite"] = {{{"criteria", all, criteria_list()}}, {}, 0};
    return m;
  }();
  return s;
}

[[noreturn]] void config_error(const std::string& msg) { throw Error(Errc::config, msg); }

// Problem invariants checked by the library count as schema violations.
template <class P>
void validate_parameters(const P& p) {
  try {
    validate(p);
  } catch (const Error& e) {
    config_error(std::string("parameters violate the problem hypotheses: ") + e.what());
  }
}

Json merge_block(const std::string& block, const std::vector<Param>& params, const Json& user) {
  Json out = Json::object();
  for (const Param& p : params) out[p.name] = p.fallback;
  if (user.is_null()) return out;
  if (!user.is_object()) config_error("'" + block + "' must be an object");
  for (const auto& [key, value] : user.items()) {
    auto it = std::find_if(params.begin(), params.end(), [&](const Param& p) { return p.name == key; });
    if (it == params.end()) config_error("unknown key '" + block + "." + key + "'");
    if (auto err = it->check(value)) config_error("'" + block + "." + key + "' " + *err);
    out[key] = value;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiments

struct Context {
  const ExperimentConfig& config;
  std::filesystem::path dir;
  RunResult result;

  double param(const char* k) const { return config.parameters.at(k).get<double>(); }
  int iparam(const char* k) const { return config.parameters.at(k).get<int>(); }
  double tol(const char* k = "tol") const { return config.tolerances.at(k).get<double>(); }

  void check(std::string name, bool pass, std::string detail) {
    result.checks.push_back({std::move(name), pass, std::move(detail)});
  }
  void csv(const std::string& file, const CsvTable& t) {
    write_csv(dir / file, t);
    result.artifacts.push_back(file);
  }
  void json(const std::string& file, const Json& j) {
    write_json(dir / file, j);
    result.artifacts.push_back(file);
  }
};

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

void riccati(Context& cx) {
  ScalarRiccatiProblem p;
  const double amp = cx.param("amplitude"), freq = cx.param("frequency");
  p.f = [amp, freq](double r) { return 1.0 + amp * std::exp(-r) * std::cos(freq * r); };
  p.envelope_constant = cx.param("envelope_constant");
  p.lambda0 = cx.param("lambda0");
  p.r1 = cx.param("r1");
  validate_parameters(p);
  const ScalarTrajectory t = integrate_scalar_riccati(p, cx.tol(), static_cast<std::size_t>(cx.iparam("samples")));
  const EnvelopeReport rep = lemma_decay_envelope_check(t, p.envelope_constant, p.lambda0);
  cx.csv("trajectory.csv", to_csv(t, rep));
  cx.json("envelope.json", to_json(rep));
  cx.check("upper envelope", rep.upper_holds, fmt("K_upper = %g", rep.k_upper));
  cx.check("lower envelope", rep.lower_holds, fmt("K_lower = %g", rep.k_lower));
  if (rep.fit) {
    cx.check("|lambda - 1| decay", rep.fit->exponent <= -0.95, fmt("exponent %.4f (r^2 %.4f)", rep.fit->exponent, rep.fit->r_squared));
  } else {
    cx.check("|lambda - 1| decay", rep.below_floor, fmt("deviation %.3g below the noise floor", rep.max_deviation));
  }
}

void shape_metric(Context& cx) {
  const int n = cx.iparam("n");
  const double amp = cx.param("amplitude"), sigma = cx.param("decay_rate");
  const RiccatiForcing q = [n, amp, sigma](double r) {
    return Matrix((1.0 + amp * std::exp(-sigma * r)) * Matrix::Identity(n, n));
  };
  const double tol = cx.tol();
  const ShapeMetricTrajectory t =
      integrate_shape_metric(q, cx.param("s0") * Matrix::Identity(n, n), Matrix::Identity(n, n), 0.0, cx.param("r1"),
                             tol, static_cast<std::size_t>(cx.iparam("samples")));
  const ComparisonReport rep = shape_metric_estimate_check(t);
  Json j = to_json(rep);
  cx.csv("trajectory.csv", to_csv(t));
  cx.check("shape and metric estimates finite", rep.finite, fmt("C = %.4g, L1 = %.4g", rep.C, rep.L1) + fmt(", L2 = %.4g", rep.L2));
  cx.check("self-adjointness preserved", rep.max_symmetry_defect <= 10.0 * tol,
           fmt("max defect %.3g (limit %.3g)", rep.max_symmetry_defect, 10.0 * tol));
  try {
    const SinhComparison s = sinh_comparison_radius(t, Matrix::Identity(n, n));
    j["sinh_radius"] = s.radius;
    j["sinh_radius_from_bounds"] = s.radius_from_bounds;
    cx.check("sinh comparison radius", true, fmt("R = %.6f (from bounds %.6f)", s.radius, s.radius_from_bounds));
  } catch (const Error& e) {
    if (e.code() != Errc::no_finite_radius) throw;
    j["sinh_radius"] = nullptr;
    cx.check("sinh comparison radius", false, e.what());
  }
  cx.json("comparison.json", j);
}

void model_system(Context& cx) {
  ModelSystemParams p;
  p.c = cx.param("c");
  p.Omega = cx.param("Omega");
  p.u0 = cx.param("u0");
  p.v0 = cx.param("v0");
  validate_parameters(p);
  ModelRunOptions o;
  o.tol = cx.tol();
  o.cap = cx.param("cap");
  o.samples = static_cast<std::size_t>(cx.iparam("samples"));
  const double r1 = cx.param("r1");
  const ModelTrajectory t = solve_model_system(p, r1, o);
  const RoundTripReport rt = model_round_trip(p, std::min(r1, 20.0), 1e-12);
  const Reduction red = reduce_to_second_order(p);
  const ExponentReport hv = homogeneous_asymptotics(red.for_v, 2.0, 25.0);
  const ExponentReport hu = homogeneous_asymptotics(red.for_u, 2.0, 25.0);
  const ParticularSolution ps = variation_of_parameters(red.for_v, 0.0, r1);
  const auto opt_fit = [](const std::optional<DecayFit>& f) { return f ? to_json(*f) : Json(nullptr); };
  Json j{{"paper_regime", t.paper_regime},
         {"halted", t.halted ? Json{{"r", t.halted->t}, {"label", t.halted->label}} : Json(nullptr)},
         {"u_fit", opt_fit(t.u_fit)},
         {"v_fit", opt_fit(t.v_fit)},
         {"v_sup", t.v_sup},
         {"round_trip", to_json(rt)},
         {"homogeneous", {{"v", to_json(hv)}, {"u", to_json(hu)}}},
         {"particular_v", {{"fit", opt_fit(ps.y_fit)}, {"det_fit", to_json(ps.det_fit)}, {"expected_exponent", ps.expected_exponent}}}};
  cx.csv("trajectory.csv", to_csv(t));
  cx.csv("particular_v.csv", to_csv(ps));
  cx.json("report.json", j);
  cx.check("no cap or blow-up", !t.halted, t.halted ? t.halted->label : "");
  const double eu = t.u_fit ? t.u_fit->exponent : std::numeric_limits<double>::infinity();
  cx.check("u growth bound", eu <= 2.0 + p.Omega + 0.05, fmt("exponent %.4f vs 2 + Omega = %g", eu, 2.0 + p.Omega));
  if (p.paper_regime()) {
    const double ev = t.v_fit ? t.v_fit->exponent : std::numeric_limits<double>::infinity();
    cx.check("v bounded", std::isfinite(t.v_sup) && ev <= 0.02, fmt("sup %.4g, exponent %.4f", t.v_sup, ev));
  }
  const double worst = std::max({rt.v_residual, rt.u_residual, rt.v_gap, rt.u_gap});
  cx.check("second-order round trip", worst <= 1e-6, fmt("max %.3g", worst));
  cx.check("homogeneous exponents", hv.matches(0.05) && hu.matches(0.05),
           fmt("v {%.3f, %.3f}", hv.recessive.exponent, hv.dominant.exponent) +
               fmt(", u {%.3f, %.3f}", hu.recessive.exponent, hu.dominant.exponent));
  const double ey = ps.y_fit ? ps.y_fit->exponent : std::numeric_limits<double>::quiet_NaN();
  cx.check("particular solution growth", std::abs(ey - ps.expected_exponent) <= 0.1,
           fmt("exponent %.4f vs %g", ey, ps.expected_exponent));
}

void compare(Context& cx) {
  const FuzzSummary s =
      fuzz_ode_compare(cx.config.seed, static_cast<std::size_t>(cx.iparam("instances")), cx.param("slack"));
  cx.json("fuzz.json", to_json(s));
  cx.check("no comparison violations", s.violations == 0,
           std::to_string(s.violations) + " of " + std::to_string(s.instances) + " instances violated");
}

void compactify(Context& cx) {
  const double omega = cx.param("omega");
  const Profile psi = Profile::sine();
  const FermiMetric src = make_perturbed_ah(2, psi, omega);
  const std::vector<double> y = cx.config.parameters.at("y").get<std::vector<double>>();
  TangentialOptions o;
  o.tol = cx.tol();
  const TangentialTrajectory t = integrate_tangential_system(src, y, 0.0, cx.param("r1"), o);
  double scale = 0.0, err = 0.0;
  for (const auto& s : t.samples) {
    const double expect = perturbed_gbar_dy(psi, omega, y[0], std::exp(-s.r));
    scale = std::max(scale, std::abs(expect));
    for (Eigen::Index k = 0; k < s.dgbar.size(); ++k) {
      err = std::max(err, std::abs(s.dgbar(k) - ((k == 0 || k == 3) ? expect : 0.0)));
    }
  }
  const double rel = scale > 0.0 ? err / scale : err;
  const LipschitzReport lip = lipschitz_verdict(t);
  const CoefBoundsReport coef = coefficient_bounds(t, 1.0 - omega);
  const DominanceReport dom = model_dominance(t, 1.0 - omega);

  const double rho_min = cx.param("rho_min");
  const int m = cx.iparam("rho_samples");
  std::vector<double> rhos;
  for (int i = 0; i < m; ++i) rhos.push_back(std::exp(std::log(rho_min) * (m - 1 - i) / (m - 1)));
  const GbarDerivativeGrid grid = gbar_derivative_grid(compactify_metric(src), {y}, rhos, shape_from_metric(src));
  const LipschitzReport grid_lip = lipschitz_verdict(grid);

  cx.csv("tangential.csv", to_csv(t));
  cx.csv("gbar_grid.csv", to_csv(grid));
  cx.json("lipschitz.json", Json{{"trajectory", to_json(lip)}, {"grid", to_json(grid_lip)}});
  cx.json("coefficients.json", Json{{"bounds", to_json(coef)}, {"dominance", to_json(dom)}});
  cx.check("tangential system matches closed form", rel <= 0.01, fmt("relative sup error %.3g", rel));
  cx.check("Lipschitz along the trajectory", lip.verdict == LipschitzVerdict::lipschitz, to_string(lip.verdict));
  cx.check("Lipschitz on the grid", grid_lip.verdict == LipschitzVerdict::lipschitz, to_string(grid_lip.verdict));
  cx.check("coefficient bounds", coef.all_pass(), "targets -1, 1, -2, -1, 2 + Omega within +0.1");
  cx.check("model system dominates", dom.holds, fmt("c = %.4g, max ratio %.4g", dom.c, std::max(dom.max_ratio_w, dom.max_ratio_gbar)));
}

std::string slug(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

void counterexample_audit_run(Context& cx) {
  CounterexampleMetric cm;
  cm.quad_tol = cx.tol("quad_tol");
  AuditGrid g;
  g.rho_min = cx.param("rho_min");
  g.rho_max = cx.param("rho_max");
  g.per_decade = cx.iparam("per_decade");
  g.y_samples = cx.iparam("y_samples");
  g.step = cx.param("step");
  if (!(g.rho_min < g.rho_max)) config_error("'parameters.rho_min' must be below 'parameters.rho_max'");
  const CounterexampleAudit a = counterexample_audit(cm, g);
  Json j = to_json(a);
  j.erase("lipschitz");
  cx.json("audit.json", j);
  cx.json("lipschitz.json", to_json(a.lipschitz));
  for (const ExponentCheck* c : a.exponent_checks()) {
    cx.csv(slug(c->name) + ".csv", to_csv(*c));
    const double e = c->fit ? c->fit->exponent : std::numeric_limits<double>::quiet_NaN();
    cx.check(c->name + " exponent", c->pass, fmt("%.4f (threshold %g)", e, c->threshold));
  }
  cx.check("d_y f on the axis", a.max_fy_error <= 1e-8, fmt("max error %.3g", a.max_fy_error));
  cx.check("Hessian of rho", a.hessian_pass, fmt("off-diagonal %.3g, diagonal defect %.3g", a.max_hessian_offdiag, a.max_hessian_diag_defect));
  cx.check("conformal identity", a.identity_pass, fmt("residual / (10 x error) <= %.3g", a.max_identity_ratio));
  cx.check("Hessian convexity", a.convexity_pass, a.rho0 ? fmt("rho0 = %g", *a.rho0) : "no rho0");
  cx.check("Lipschitz verdict", a.lipschitz.verdict == LipschitzVerdict::log_blowup,
           to_string(a.lipschitz.verdict) + fmt(", slope %.4f, r^2 %.5f", a.lipschitz.slope, a.lipschitz.r_squared));
}

void full_suite(Context& cx) {
  Json rows = Json::array();
  for (const auto& id : cx.config.parameters.at("criteria")) {
    const CriterionResult r = run_criterion(id.get<int>());
    rows.push_back(Json{{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"details", r.details}});
    cx.check(std::to_string(r.id) + " " + r.name, r.pass, r.details);
  }
  cx.json("acceptance.json", rows);
}

const std::map<std::string, void (*)(Context&)>& runners() {
  static const std::map<std::string, void (*)(Context&)> r{
      {"riccati", riccati},       {"shape-metric", shape_metric},
      {"model-system", model_system}, {"compare", compare},
      {"compactify", compactify}, {"counterexample-audit", counterexample_audit_run},
      {"full-suite", full_suite}};
  return r;
}

}  // namespace

std::string library_version() { return AHLAB_VERSION; }

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> list{
      {"riccati", "scalar Riccati decay lemma with its proof envelopes"},
      {"shape-metric", "matrix Riccati and metric flow with shape/metric estimates and sinh radius"},
      {"model-system", "model system growth, second-order reductions, homogeneous and particular solutions"},
      {"compare", "seeded fuzzing of the ODE comparison theorem"},
      {"compactify", "tangential derivative system on the perturbed family, Lipschitz verdict"},
      {"counterexample-audit", "curvature, Hessian and Christoffel audit of the non-Lipschitz example"},
      {"full-suite", "every acceptance criterion as one pass/fail matrix"},
  };
  return list;
}

Json ExperimentConfig::resolved() const {
  return Json{{"schema_version", kSchemaVersion},
              {"experiment", experiment},
              {"seed", seed},
              {"output_dir", output_dir.generic_string()},
              {"tolerances", tolerances},
              {"parameters", parameters}};
}

ExperimentConfig resolve_config(const std::string& experiment, const Json& user, std::optional<std::uint64_t> seed,
                                std::optional<std::filesystem::path> output_dir) {
  const auto it = schemas().find(experiment);
  if (it == schemas().end()) config_error("unknown experiment '" + experiment + "'");
  const Schema& schema = it->second;
  if (!user.is_null() && !user.is_object()) config_error("config must be a JSON object");
  const Json u = user.is_null() ? Json::object() : user;
  for (const auto& [key, value] : u.items()) {
    static const std::vector<std::string> allowed{"schema_version", "experiment", "seed",
                                                  "output_dir",     "tolerances", "parameters"};
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) config_error("unknown key '" + key + "'");
  }
  if (u.contains("schema_version")) {
    if (!u["schema_version"].is_number_integer() || u["schema_version"].get<int>() != kSchemaVersion) {
      config_error("unsupported schema_version (expected " + std::to_string(kSchemaVersion) + ")");
    }
  }
  if (u.contains("experiment") && (!u["experiment"].is_string() || u["experiment"].get<std::string>() != experiment)) {
    config_error("config is for a different experiment");
  }
  ExperimentConfig c;
  c.experiment = experiment;
  c.seed = schema.default_seed;
  if (u.contains("seed")) {
    if (!u["seed"].is_number_integer() || u["seed"].get<std::int64_t>() < 0) config_error("'seed' must be a non-negative integer");
    c.seed = u["seed"].get<std::uint64_t>();
  }
  if (seed) c.seed = *seed;
  c.output_dir = "ahlab-out";
  if (u.contains("output_dir")) {
    if (!u["output_dir"].is_string()) config_error("'output_dir' must be a string");
    c.output_dir = u["output_dir"].get<std::string>();
  }
  if (output_dir) c.output_dir = *output_dir;
  c.tolerances = merge_block("tolerances", schema.tolerances, u.contains("tolerances") ? u["tolerances"] : Json());
  c.parameters = merge_block("parameters", schema.parameters, u.contains("parameters") ? u["parameters"] : Json());
  return c;
}

bool RunResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

RunResult run_experiment(const ExperimentConfig& config) {
  const auto it = runners().find(config.experiment);
  if (it == runners().end()) config_error("unknown experiment '" + config.experiment + "'");
  Context cx{config, config.output_dir / config.experiment, {}};
  std::filesystem::create_directories(cx.dir);
  it->second(cx);
  Json checks = Json::array();
  for (const auto& c : cx.result.checks) checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  Json manifest{{"tool", "ahlab"},
                {"version", library_version()},
                {"config", config.resolved()},
                {"artifacts", cx.result.artifacts},
                {"checks", checks},
                {"pass", cx.result.pass()}};
  write_json(cx.dir / "manifest.json", manifest);
  return cx.result;
}

ExitCode run_command(const std::string& experiment, const std::optional<std::filesystem::path>& config_path,
                     std::optional<std::filesystem::path> output_dir, std::optional<std::uint64_t> seed,
                     std::ostream& log) {
  ExperimentConfig config;
  try {
    Json user;
    if (config_path) {
      std::ifstream in(*config_path);
      if (!in) config_error("cannot read config file " + config_path->string());
      try {
        user = Json::parse(in);
      } catch (const Json::parse_error& e) {
        config_error(std::string("config is not valid JSON: ") + e.what());
      }
    }
    config = resolve_config(experiment, user, seed, std::move(output_dir));
  } catch (const Error& e) {
    log << "schema violation: " << e.what() << '\n';
    return ExitCode::schema;
  }
  RunResult res;
  try {
    res = run_experiment(config);
  } catch (const Error& e) {
    if (e.code() == Errc::config) {
      log << "schema violation: " << e.what() << '\n';
      return ExitCode::schema;
    }
    log << "runtime error: " << e.what() << '\n';
    return ExitCode::runtime;
  } catch (const std::exception& e) {
    log << "runtime error: " << e.what() << '\n';
    return ExitCode::runtime;
  }
  std::size_t passed = 0;
  for (const auto& c : res.checks) {
    log << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
    passed += c.pass ? 1 : 0;
  }
  log << experiment << ": " << (res.pass() ? "PASS" : "FAIL") << " (" << passed << "/" << res.checks.size()
      << " checks), output in " << (config.output_dir / config.experiment).string() << '\n';
  return res.pass() ? ExitCode::ok : ExitCode::check_failed;
}

ExitCode selftest(std::ostream& log) {
  bool ok = true;
  const auto line = [&](const std::string& name, double value, double limit) {
    const bool pass = value <= limit;
    ok = ok && pass;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3g (limit %.3g)", value, limit);
    log << (pass ? "[PASS] " : "[FAIL] ") << name << ": " << buf << '\n';
  };
  try {
    line("hyperbolic sign convention (sec = -1, R + K = 0)", verify_sign_convention(), 1e-10);
    Matrix g(3, 3);
    g << 2.0, 0.3, -0.1, 0.3, 1.5, 0.2, -0.1, 0.2, 1.0;
    line("g (x) g = 2K", (kulkarni_nomizu(g, g) - 2.0 * constant_curvature_tensor(g)).max_abs(), 1e-13);
    const MetricJet j =
        make_perturbed_ah(2, Profile::sine(), 1.5).full().evaluate(chart_coords(1.0, {0.4, 0.2}), 2, 1e-3);
    const Tensor4 r = riemann(j);
    line("Riemann symmetries (perturbed family)", riemann_symmetry_defect(r) / std::max(1.0, r.max_abs()), 1e-12);
    line("first Bianchi identity (perturbed family)", bianchi_defect(r) / std::max(1.0, r.max_abs()), 1e-12);
    CounterexampleMetric cm;
    line("d_y f(0, rho) = 2 log(1/rho) at rho = 1e-3",
         std::abs(counterexample_f(cm, 0.0, 1e-3, 1).f_y - 2.0 * std::log(1e3)), 1e-8);
  } catch (const std::exception& e) {
    log << "runtime error: " << e.what() << '\n';
    return ExitCode::runtime;
  }
  return ok ? ExitCode::ok : ExitCode::check_failed;
}

}  // namespace ahlab::cli
