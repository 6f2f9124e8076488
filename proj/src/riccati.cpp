#include "ahlab/riccati.hpp"

#include "ahlab/curvature.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ahlab {

void validate(const ScalarRiccatiProblem& prob) {
  if (!prob.f) throw Error(Errc::precondition, "missing right-hand side");
  if (!(prob.lambda0 > 0.0)) throw Error(Errc::precondition, "lambda(0) must be positive");
  if (!(prob.envelope_constant >= 0.0)) throw Error(Errc::precondition, "J must be nonnegative");
  if (!(prob.r1 > prob.r0)) throw Error(Errc::precondition, "empty span");
  for (double r : ode::uniform_grid(prob.r0, prob.r1, 1024)) {
    // Slack covers the rounding of f - 1 once f is within a few ulps of 1.
    const double f = prob.f(r);
    const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(f));
    if (std::abs(f - 1.0) > prob.envelope_constant * std::exp(-r) * (1.0 + 1e-12) + slack) {
      throw Error(Errc::precondition, "|f - 1| exceeds J e^{-r}", r);
    }
  }
}

ScalarTrajectory integrate_scalar_riccati(const ScalarRiccatiProblem& prob, double tol,
                                          std::size_t samples) {
  validate(prob);
  if (!(tol > 0.0)) throw Error(Errc::precondition, "tolerance must be positive");
  const auto grid = ode::uniform_grid(prob.r0, prob.r1, samples);
  const ode::Rhs rhs = [&](double r, const Vector& y, Vector& dy) {
    dy(0) = prob.f(r) - y(0) * y(0);
  };
  const ode::Guard guard = [](double r, const Vector& y) -> std::optional<std::string> {
    if (!(y(0) > 0.0)) throw Error(Errc::positivity_loss, "lambda reached zero", r);
    return std::nullopt;
  };
  Vector y0(1);
  y0(0) = prob.lambda0;
  const ode::Solution sol = ode::integrate(rhs, y0, grid, {tol, tol}, guard);
  ScalarTrajectory traj;
  traj.r = sol.t;
  traj.lambda.reserve(sol.y.size());
  for (const auto& v : sol.y) traj.lambda.push_back(v(0));
  return traj;
}

EnvelopeReport lemma_decay_envelope_check(const ScalarTrajectory& traj, double J, double lambda0,
                                          double noise_floor) {
  const auto& r = traj.r;
  const auto& lam = traj.lambda;
  if (r.size() != lam.size() || r.empty()) throw Error(Errc::insufficient_data, "empty trajectory");
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!(lam[i] > 0.0)) throw Error(Errc::precondition, "trajectory is not positive", r[i]);
  }

  EnvelopeReport rep;
  // (a) first grid point after which lambda stays above 1/2
  for (std::size_t i = lam.size(); i-- > 0;) {
    if (lam[i] > 0.5) {
      rep.r_half = r[i];
    } else {
      break;
    }
  }

  // (b) upper test function
  rep.k_upper = std::max(J, lambda0) + 1.0;
  rep.upper_holds = true;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (lam[i] > 1.0 + rep.k_upper * std::exp(-r[i])) {
      rep.upper_holds = false;
      rep.upper_violation_r = r[i];
      break;
    }
  }

  // (c) lower test function, from r_half on
  if (rep.r_half) {
    rep.k_lower = std::max(2.0 * J, 0.5 * std::exp(*rep.r_half)) + 1.0;
    rep.lower_holds = true;
    for (std::size_t i = 0; i < lam.size(); ++i) {
      if (r[i] < *rep.r_half) continue;
      if (lam[i] < 1.0 - rep.k_lower * std::exp(-r[i])) {
        rep.lower_holds = false;
        rep.lower_violation_r = r[i];
        break;
      }
    }
  }

  // (d) decay of |lambda - 1|, measured through its tail supremum
  std::vector<double> dev(lam.size());
  for (std::size_t i = 0; i < lam.size(); ++i) dev[i] = std::abs(lam[i] - 1.0);
  const std::vector<double> env = tail_supremum(dev);
  const Window w = tail_window(r);
  std::vector<double> xs, qs;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] < w.lo) continue;
    rep.max_deviation = std::max(rep.max_deviation, env[i]);
    if (env[i] > noise_floor) {
      xs.push_back(r[i]);
      qs.push_back(env[i]);
    }
  }
  rep.below_floor = xs.size() < 8;
  if (!rep.below_floor) rep.fit = fit_decay_rate(xs, qs);
  return rep;
}

namespace {

Vector pack(const Matrix& s, const Matrix& g) {
  const auto nn = s.size();
  Vector y(2 * nn);
  y.head(nn) = Eigen::Map<const Vector>(s.data(), nn);
  y.tail(nn) = Eigen::Map<const Vector>(g.data(), nn);
  return y;
}

void unpack(const Vector& y, Eigen::Index n, Matrix& s, Matrix& g) {
  s = Eigen::Map<const Matrix>(y.data(), n, n);
  g = Eigen::Map<const Matrix>(y.data() + n * n, n, n);
}

Matrix forcing_at(const CurvatureSource& source, double r) {
  if (const auto* q = std::get_if<RiccatiForcing>(&source)) return (*q)(r);
  const auto& fs = std::get<FermiCurvatureSource>(source);
  if (fs.metric == nullptr) throw Error(Errc::precondition, "null Fermi metric source");
  return -normal_curvature(*fs.metric, fs.y, r, fs.step);
}

}  // namespace

ShapeMetricTrajectory integrate_shape_metric(const CurvatureSource& source, const Matrix& S0,
                                             const Matrix& g0, double r0, double r1, double tol,
                                             std::size_t samples) {
  const auto n = S0.rows();
  if (S0.cols() != n || g0.rows() != n || g0.cols() != n) {
    throw Error(Errc::dimension_mismatch, "S0 and g0 must be n x n");
  }
  if (!is_spd(g0)) throw Error(Errc::precondition, "g0 must be positive definite");
  if (self_adjoint_eigen_range(S0, g0).min <= 0.0) {
    throw Error(Errc::precondition, "S0 must have positive eigenvalues");
  }
  if (!(tol > 0.0)) throw Error(Errc::precondition, "tolerance must be positive");

  const ode::Rhs rhs = [&](double r, const Vector& y, Vector& dy) {
    Matrix s, g;
    unpack(y, n, s, g);
    const Matrix ds = forcing_at(source, r) - s * s;
    const Matrix dg = g * s + s.transpose() * g;
    dy.head(n * n) = Eigen::Map<const Vector>(ds.data(), n * n);
    dy.tail(n * n) = Eigen::Map<const Vector>(dg.data(), n * n);
  };
  const ode::Guard guard = [&](double r, const Vector& y) -> std::optional<std::string> {
    Matrix s, g;
    unpack(y, n, s, g);
    if (!is_spd(g)) throw Error(Errc::convexity_loss, "metric lost positive definiteness", r);
    if (self_adjoint_eigen_range(s, g).min <= 0.0) {
      throw Error(Errc::convexity_loss, "shape operator eigenvalue reached zero", r);
    }
    return std::nullopt;
  };
  const auto grid = ode::uniform_grid(r0, r1, samples);
  const ode::Solution sol = ode::integrate(rhs, pack(S0, g0), grid, {tol, tol}, guard);

  ShapeMetricTrajectory traj;
  traj.samples.reserve(sol.t.size());
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    ShapeMetricSample smp;
    smp.r = sol.t[i];
    unpack(sol.y[i], n, smp.S, smp.g);
    smp.shape = self_adjoint_eigen_range(smp.S, smp.g);
    smp.metric = symmetric_eigen_range(smp.g);
    const Matrix h = smp.g * smp.S;
    smp.symmetry_defect = max_abs(h - h.transpose()) / std::max(max_abs(h), 1e-300);
    traj.samples.push_back(std::move(smp));
  }
  return traj;
}

ComparisonReport shape_metric_estimate_check(const ShapeMetricTrajectory& traj,
                                             std::optional<Window> window) {
  if (traj.samples.empty()) throw Error(Errc::insufficient_data, "empty trajectory");
  std::vector<double> rs;
  for (const auto& s : traj.samples) rs.push_back(s.r);
  ComparisonReport rep;
  rep.window = window ? *window : tail_window(rs);
  rep.L1 = std::numeric_limits<double>::infinity();
  rep.L2 = 0.0;
  for (const auto& s : traj.samples) {
    rep.max_symmetry_defect = std::max(rep.max_symmetry_defect, s.symmetry_defect);
    if (s.r < rep.window.lo || s.r > rep.window.hi) continue;
    const double dev = std::max(std::abs(s.shape.max - 1.0), std::abs(s.shape.min - 1.0));
    rep.C = std::max(rep.C, std::exp(s.r) * dev);
    rep.L1 = std::min(rep.L1, std::exp(-2.0 * s.r) * s.metric.min);
    rep.L2 = std::max(rep.L2, std::exp(-2.0 * s.r) * s.metric.max);
  }
  rep.finite = std::isfinite(rep.C) && std::isfinite(rep.L1) && std::isfinite(rep.L2) &&
               rep.L1 > 0.0 && rep.L2 >= rep.L1;
  return rep;
}

namespace {

// Smallest R in [0, cap] with ok(R), assuming ok is monotone in R.
std::optional<double> bisect_radius(const std::function<bool(double)>& ok, double cap) {
  if (ok(0.0)) return 0.0;
  if (!ok(cap)) return std::nullopt;
  double lo = 0.0, hi = cap;
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

SinhComparison sinh_comparison_radius(const ShapeMetricTrajectory& traj, const Matrix& reference) {
  if (traj.samples.size() < 2) throw Error(Errc::insufficient_data, "trajectory too short");
  struct Row {
    double r, lo, hi;
  };
  std::vector<Row> rows;
  SinhComparison out;
  out.L1 = std::numeric_limits<double>::infinity();
  for (const auto& s : traj.samples) {
    const EigenRange e = generalized_eigen_range(s.g, reference);
    rows.push_back({s.r, e.min, e.max});
    out.L1 = std::min(out.L1, std::exp(-2.0 * s.r) * e.min);
    out.L2 = std::max(out.L2, std::exp(-2.0 * s.r) * e.max);
  }
  constexpr double rel = 1e-12;
  const auto sinh2 = [](double x) { return std::sinh(x) * std::sinh(x); };
  const double cap = 0.5 * rows.back().r;

  const auto ok_direct = [&](double R) {
    for (const auto& row : rows) {
      if (row.r <= R) continue;
      if (row.lo < sinh2(row.r - R) * (1.0 - rel)) return false;
      if (row.hi > sinh2(row.r + R) * (1.0 + rel)) return false;
    }
    return true;
  };
  const auto ok_bounds = [&](double R) {
    for (const auto& row : rows) {
      if (row.r <= R) continue;
      const double e2r = std::exp(2.0 * row.r);
      if (out.L1 * e2r < sinh2(row.r - R) * (1.0 - rel)) return false;
      if (out.L2 * e2r > sinh2(row.r + R) * (1.0 + rel)) return false;
    }
    return true;
  };
  const auto direct = bisect_radius(ok_direct, cap);
  const auto bounds = bisect_radius(ok_bounds, cap);
  if (!direct || !bounds) {
    throw Error(Errc::no_finite_radius, "sinh comparison fails for every R up to half the span");
  }
  out.radius = *direct;
  out.radius_from_bounds = *bounds;
  return out;
}

}  // namespace ahlab
