#include "ahlab/report.hpp"

#include "ahlab/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>

namespace ahlab {

namespace {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// JSON has no NaN or infinity; those become null.
Json num(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? to_json(*v) : Json(nullptr);
}

Json optional_num(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open for writing: " + path.string());
  return out;
}

}  // namespace

void write_csv(std::ostream& out, const CsvTable& table) {
  out << "# " << table.title << ": ";
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? ", " : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << number(row[i]);
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out = open_for_write(path);
  write_csv(out, table);
}

void write_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out = open_for_write(path);
  out << value.dump(2) << '\n';
}

CsvTable to_csv(const ScalarTrajectory& traj, const EnvelopeReport& rep) {
  CsvTable t{"scalar Riccati trajectory",
             {"r [1]", "lambda [1]", "upper envelope [1]", "lower envelope [1]", "|lambda - 1| [1]"},
             {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < traj.r.size(); ++i) {
    const double r = traj.r[i];
    const double lower = rep.r_half && r >= *rep.r_half ? 1.0 - rep.k_lower * std::exp(-r) : nan;
    t.rows.push_back({r, traj.lambda[i], 1.0 + rep.k_upper * std::exp(-r), lower, std::abs(traj.lambda[i] - 1.0)});
  }
  return t;
}

CsvTable to_csv(const ShapeMetricTrajectory& traj) {
  CsvTable t{"shape operator and metric flow",
             {"r [1]", "min eig S [1]", "max eig S [1]", "min eig g [1]", "max eig g [1]",
              "symmetry defect of gS [relative]"},
             {}};
  for (const auto& s : traj.samples) {
    t.rows.push_back({s.r, s.shape.min, s.shape.max, s.metric.min, s.metric.max, s.symmetry_defect});
  }
  return t;
}

CsvTable to_csv(const ModelTrajectory& traj) {
  CsvTable t{"model system", {"r [1]", "u [1]", "v [1]"}, {}};
  for (std::size_t i = 0; i < traj.r.size(); ++i) t.rows.push_back({traj.r[i], traj.u[i], traj.v[i]});
  return t;
}

CsvTable to_csv(const ParticularSolution& ps) {
  CsvTable t{"particular solution by variation of parameters", {"r [1]", "y [1]", "dy/dr [1]"}, {}};
  for (std::size_t i = 0; i < ps.r.size(); ++i) t.rows.push_back({ps.r[i], ps.y[i], ps.dy[i]});
  return t;
}

CsvTable to_csv(const TangentialTrajectory& traj) {
  CsvTable t{"tangential derivative system", {"r [1]", "max |d W| [1]", "max |d gbar| [1]"}, {}};
  for (const auto& s : traj.samples) {
    t.rows.push_back({s.r, s.dW.size() ? s.dW.cwiseAbs().maxCoeff() : 0.0,
                      s.dgbar.size() ? s.dgbar.cwiseAbs().maxCoeff() : 0.0});
  }
  return t;
}

CsvTable to_csv(const GbarDerivativeGrid& grid) {
  const std::size_t n = grid.cells.empty() ? 0 : grid.cells.front().y.size();
  CsvTable t{"compactified metric first derivatives", {"rho [1]"}, {}};
  for (std::size_t k = 0; k < n; ++k) t.columns.push_back("y" + std::to_string(k + 1) + " [rad]");
  for (const char* c : {"direction [index]", "a [index]", "b [index]", "value [1]"}) t.columns.push_back(c);
  for (const auto& c : grid.cells) {
    for (std::size_t dir = 0; dir <= c.d_tangential.size(); ++dir) {
      const Matrix& m = dir == 0 ? c.d_rho : c.d_tangential[dir - 1];
      for (Eigen::Index a = 0; a < m.rows(); ++a)
        for (Eigen::Index b = a; b < m.cols(); ++b) {
          std::vector<double> row{c.rho};
          row.insert(row.end(), c.y.begin(), c.y.end());
          row.push_back(static_cast<double>(dir));
          row.push_back(static_cast<double>(a + 1));
          row.push_back(static_cast<double>(b + 1));
          row.push_back(m(a, b));
          t.rows.push_back(std::move(row));
        }
    }
  }
  return t;
}

CsvTable to_csv(const ExponentCheck& check) {
  CsvTable t{check.name, {"rho [1]", "sup over y [1]", "fitted C rho^p [1]"}, {}};
  for (std::size_t i = 0; i < check.rho.size(); ++i) {
    const double fitted = check.fit ? std::exp(check.fit->log_constant + check.fit->exponent * std::log(check.rho[i]))
                                    : std::numeric_limits<double>::quiet_NaN();
    t.rows.push_back({check.rho[i], check.sup[i], fitted});
  }
  return t;
}

Json to_json(const DecayFit& fit) {
  return Json{{"exponent", num(fit.exponent)},   {"log_constant", num(fit.log_constant)},
              {"window", {num(fit.x_lo), num(fit.x_hi)}}, {"r_squared", num(fit.r_squared)},
              {"n_samples", fit.n_samples}};
}

Json to_json(const EnvelopeReport& rep) {
  return Json{{"r_half", optional_num(rep.r_half)},
              {"k_upper", num(rep.k_upper)},
              {"upper_holds", rep.upper_holds},
              {"upper_violation_r", optional_num(rep.upper_violation_r)},
              {"k_lower", num(rep.k_lower)},
              {"lower_holds", rep.lower_holds},
              {"lower_violation_r", optional_num(rep.lower_violation_r)},
              {"fit", optional_json(rep.fit)},
              {"max_deviation", num(rep.max_deviation)},
              {"below_floor", rep.below_floor},
              {"pass", rep.passed()}};
}

Json to_json(const ComparisonReport& rep) {
  return Json{{"C", num(rep.C)},
              {"L1", num(rep.L1)},
              {"L2", num(rep.L2)},
              {"window", {num(rep.window.lo), num(rep.window.hi)}},
              {"max_symmetry_defect", num(rep.max_symmetry_defect)},
              {"finite", rep.finite}};
}

Json to_json(const RoundTripReport& rep) {
  return Json{{"v_residual", num(rep.v_residual)},
              {"u_residual", num(rep.u_residual)},
              {"v_gap", num(rep.v_gap)},
              {"u_gap", num(rep.u_gap)}};
}

Json to_json(const ExponentReport& rep) {
  return Json{{"recessive", to_json(rep.recessive)},
              {"dominant", to_json(rep.dominant)},
              {"expected", {num(rep.expected_recessive), num(rep.expected_dominant)}},
              {"conclusive", rep.conclusive}};
}

Json to_json(const FuzzSummary& summary) {
  Json records = Json::array();
  for (const auto& r : summary.records) {
    Json coeffs = Json::array();
    for (double c : r.coefficients) coeffs.push_back(num(c));
    records.push_back(Json{{"index", r.index},
                           {"coefficients", coeffs},
                           {"shrink", {num(r.shrink_x), num(r.shrink_y)}},
                           {"x0", num(r.x0)},
                           {"y0", num(r.y0)},
                           {"u0", num(r.u0)},
                           {"v0", num(r.v0)},
                           {"t1", num(r.t1)},
                           {"verdict", r.holds ? "holds" : "violated"},
                           {"max_x_minus_u", num(r.max_x_minus_u)},
                           {"max_y_minus_v", num(r.max_y_minus_v)}});
  }
  return Json{{"seed", summary.seed},
              {"instances", summary.instances},
              {"violations", summary.violations},
              {"slack", num(summary.slack)},
              {"records", records}};
}

Json to_json(const CoefBoundsReport& rep) {
  Json fits = Json::array();
  for (const auto& f : rep.fits) {
    fits.push_back(Json{{"name", f.name},
                        {"target", num(f.target)},
                        {"fit", optional_json(f.fit)},
                        {"vanishes", f.vanishes},
                        {"conclusive", f.conclusive},
                        {"pass", f.pass},
                        {"constant", num(f.constant)}});
  }
  return Json{{"Omega", num(rep.Omega)}, {"fits", fits}, {"pass", rep.all_pass()}};
}

Json to_json(const DominanceReport& rep) {
  return Json{{"c", num(rep.c)},
              {"holds", rep.holds},
              {"max_ratio_w", num(rep.max_ratio_w)},
              {"max_ratio_gbar", num(rep.max_ratio_gbar)}};
}

Json to_json(const LipschitzReport& rep) {
  return Json{{"verdict", to_string(rep.verdict)},
              {"window", {num(rep.rho_lo), num(rep.rho_hi)}},
              {"slope", num(rep.slope)},
              {"power_slope", num(rep.power_slope)},
              {"bound", num(rep.bound)},
              {"r_squared", num(rep.r_squared)},
              {"diagnostics", rep.diagnostics}};
}

Json to_json(const ExponentCheck& check) {
  return Json{{"name", check.name},
              {"target", num(check.target)},
              {"threshold", num(check.threshold)},
              {"fit", optional_json(check.fit)},
              {"conclusive", check.conclusive},
              {"pass", check.pass}};
}

Json to_json(const CounterexampleAudit& a) {
  Json exps = Json::array();
  for (const ExponentCheck* c : a.exponent_checks()) exps.push_back(to_json(*c));
  Json ratio = Json::array();
  for (double v : a.convexity_ratio) ratio.push_back(num(v));
  return Json{
      {"grid",
       {{"rho_min", num(a.grid.rho_min)},
        {"rho_max", num(a.grid.rho_max)},
        {"per_decade", a.grid.per_decade},
        {"y_samples", a.grid.y_samples},
        {"step", num(a.grid.step)}}},
      {"points", a.points},
      {"max_fy_error", num(a.max_fy_error)},
      {"exponents", exps},
      {"hessian",
       {{"max_offdiag", num(a.max_hessian_offdiag)},
        {"max_diag_defect", num(a.max_hessian_diag_defect)},
        {"pass", a.hessian_pass}}},
      {"identity",
       {{"max_residual", num(a.max_identity_residual)},
        {"max_ratio", num(a.max_identity_ratio)},
        {"pass", a.identity_pass}}},
      {"convexity", {{"ratio", ratio}, {"rho0", optional_num(a.rho0)}, {"pass", a.convexity_pass}}},
      {"lipschitz", to_json(a.lipschitz)},
      {"pass", a.passed()}};
}

}  // namespace ahlab
