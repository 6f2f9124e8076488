#include "ahlab/comparison.hpp"

#include "ahlab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

namespace ahlab {

void validate(const ModelSystemParams& p) {
  if (!(p.c >= 0.0)) throw Error(Errc::precondition, "c must be nonnegative");
  if (!(p.u0 > 0.0) || !(p.v0 > 0.0)) throw Error(Errc::precondition, "u0 and v0 must be positive");
  if (!std::isfinite(p.Omega) || !std::isfinite(p.r0)) throw Error(Errc::precondition, "non-finite parameter");
}

namespace {

std::optional<DecayFit> try_fit(const std::vector<double>& x, const std::vector<double>& q) {
  if (x.size() < 8) return std::nullopt;
  const Window w = tail_window(x);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= w.lo && !(q[i] > 0.0)) return std::nullopt;
  }
  return fit_decay_rate(x, q, w);
}

std::vector<double> abs_values(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return std::abs(x); });
  return out;
}

ode::Rhs model_rhs(const ModelSystemParams& p, double forcing_scale) {
  return [c = p.c, om = p.Omega, forcing_scale](double r, const Vector& y, Vector& dy) {
    const double em = std::exp(-r);
    dy(0) = c * em * y(0) + c / em * y(1) + forcing_scale * c * std::exp((2.0 + om) * r);
    dy(1) = c * em * em * y(0) + c * em * y(1);
  };
}

}  // namespace

ModelTrajectory solve_model_system(const ModelSystemParams& p, double r1, const ModelRunOptions& opts) {
  validate(p);
  if (!(opts.tol > 0.0)) throw Error(Errc::precondition, "tolerance must be positive");
  if (!(r1 > p.r0)) throw Error(Errc::precondition, "empty span");
  Vector y0(2);
  y0 << p.u0, p.v0;
  const auto grid = ode::uniform_grid(p.r0, r1, opts.samples);
  const ode::Guard guard = [cap = opts.cap](double, const Vector& y) -> std::optional<std::string> {
    if (std::abs(y(0)) > cap) return std::string("cap");
    return std::nullopt;
  };
  const ode::Solution sol = ode::integrate(model_rhs(p, opts.forcing_scale), y0, grid, {opts.tol, opts.tol}, guard);
  ModelTrajectory t;
  t.r = sol.t;
  t.halted = sol.halted;
  t.paper_regime = p.paper_regime();
  for (const auto& y : sol.y) {
    t.u.push_back(y(0));
    t.v.push_back(y(1));
    t.v_sup = std::max(t.v_sup, std::abs(y(1)));
  }
  t.u_fit = try_fit(t.r, t.u);
  t.v_fit = try_fit(t.r, t.v);
  return t;
}

Reduction reduce_to_second_order(const ModelSystemParams& prm) {
  if (!(prm.c > 0.0)) throw Error(Errc::reduction_undefined, "second-order reduction needs c > 0");
  const double c = prm.c, om = prm.Omega;
  Reduction red;
  red.for_v.which = Unknown::for_v;
  red.for_v.p = [c](double r) { return 2.0 - 2.0 * c * std::exp(-r); };
  red.for_v.q = [c](double r) {
    const double e = std::exp(-r);
    return c * e * (c * e - c - 1.0);
  };
  red.for_v.forcing = [c, om](double r) { return c * c * std::exp(om * r); };
  red.for_v.forcing_exponent = om;
  red.for_v.provenance = "v'' + (2 - 2c e^-r) v' + c e^-r (c e^-r - c - 1) v = c^2 e^(Omega r)";

  red.for_u.which = Unknown::for_u;
  red.for_u.p = [c](double r) { return -1.0 - 2.0 * c * std::exp(-r); };
  red.for_u.q = [c](double r) {
    const double e = std::exp(-r);
    return c * (2.0 - c) * e + c * c * e * e;
  };
  red.for_u.forcing = [c, om](double r) {
    return (1.0 + om) * c * std::exp((2.0 + om) * r) - c * c * std::exp((1.0 + om) * r);
  };
  red.for_u.forcing_exponent = 2.0 + om;
  red.for_u.provenance =
      "u'' + (-1 - 2c e^-r) u' + (c(2 - c) e^-r + c^2 e^-2r) u = (1 + Omega) c e^((2 + Omega) r) - c^2 e^((1 + Omega) r)";

  red.u_from_v = [c](double r, double v, double dv) { return std::exp(2.0 * r) * dv / c - std::exp(r) * v; };
  red.v_from_u = [c, om](double r, double u, double du) {
    return std::exp(-r) * du / c - std::exp(-2.0 * r) * u - std::exp((1.0 + om) * r);
  };
  return red;
}

namespace {

SecondOrderTrajectory second_order(const SecondOrderODE& eq, double r0, double r1, double y0, double dy0,
                                   bool homogeneous, const ode::Options& o, std::size_t samples) {
  const ode::Rhs rhs = [&eq, homogeneous](double r, const Vector& y, Vector& dy) {
    dy(0) = y(1);
    dy(1) = -eq.p(r) * y(1) - eq.q(r) * y(0) + (homogeneous ? 0.0 : eq.forcing(r));
  };
  Vector s0(2);
  s0 << y0, dy0;
  const ode::Solution sol = ode::integrate(rhs, s0, ode::uniform_grid(r0, r1, samples), o);
  SecondOrderTrajectory t;
  t.r = sol.t;
  for (const auto& y : sol.y) {
    t.y.push_back(y(0));
    t.dy.push_back(y(1));
  }
  return t;
}

}  // namespace

SecondOrderTrajectory integrate_second_order(const SecondOrderODE& eq, double r0, double r1, double y0,
                                             double dy0, bool homogeneous, double tol, std::size_t samples) {
  return second_order(eq, r0, r1, y0, dy0, homogeneous, {tol, tol}, samples);
}

RoundTripReport model_round_trip(const ModelSystemParams& prm, double r1, double tol, std::size_t samples) {
  const Reduction red = reduce_to_second_order(prm);
  ModelRunOptions opts;
  opts.tol = tol;
  opts.samples = samples;
  opts.cap = std::numeric_limits<double>::infinity();
  const ModelTrajectory m = solve_model_system(prm, r1, opts);
  const double c = prm.c, om = prm.Omega;

  RoundTripReport rep;
  std::vector<double> du(m.r.size()), dv(m.r.size());
  for (std::size_t i = 0; i < m.r.size(); ++i) {
    const double r = m.r[i], u = m.u[i], v = m.v[i];
    const double e = std::exp(-r);
    const double forcing = c * std::exp((2.0 + om) * r);
    du[i] = c * e * u + c / e * v + forcing;
    dv[i] = c * e * e * u + c * e * v;
    const double ddv = -2.0 * c * e * e * u + c * e * e * du[i] - c * e * v + c * e * dv[i];
    const double ddu = -c * e * u + c * e * du[i] + c / e * v + c / e * dv[i] + (2.0 + om) * forcing;

    const std::array<double, 4> tv{ddv, red.for_v.p(r) * dv[i], red.for_v.q(r) * v, red.for_v.forcing(r)};
    const std::array<double, 4> tu{ddu, red.for_u.p(r) * du[i], red.for_u.q(r) * u, red.for_u.forcing(r)};
    auto rel = [](const std::array<double, 4>& t) {
      double scale = 0.0;
      for (double x : t) scale = std::max(scale, std::abs(x));
      return std::abs(t[0] + t[1] + t[2] - t[3]) / std::max(scale, 1e-300);
    };
    rep.v_residual = std::max(rep.v_residual, rel(tv));
    rep.u_residual = std::max(rep.u_residual, rel(tu));
  }

  // Reconstruction multiplies v' by e^{2r}, so the direct runs use relative error control only.
  const ode::Options rel{tol, tol * 1e-12};
  const SecondOrderTrajectory sv = second_order(red.for_v, prm.r0, r1, prm.v0, dv.front(), false, rel, samples);
  const SecondOrderTrajectory su = second_order(red.for_u, prm.r0, r1, prm.u0, du.front(), false, rel, samples);
  for (std::size_t i = 0; i < m.r.size(); ++i) {
    const double r = m.r[i];
    rep.v_gap = std::max(rep.v_gap, std::abs(sv.y[i] - m.v[i]) / std::abs(m.v[i]));
    rep.v_gap = std::max(rep.v_gap, std::abs(red.u_from_v(r, sv.y[i], sv.dy[i]) - m.u[i]) / std::abs(m.u[i]));
    rep.u_gap = std::max(rep.u_gap, std::abs(su.y[i] - m.u[i]) / std::abs(m.u[i]));
    rep.u_gap = std::max(rep.u_gap, std::abs(red.v_from_u(r, su.y[i], su.dy[i]) - m.v[i]) / std::abs(m.v[i]));
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

// Integral of h over [x_i, x_{i+1}] on a uniform grid from the cubic through
// four neighbouring samples (shifted inward at the ends).
double panel(const std::vector<double>& h, std::size_t i, double dx) {
  const std::size_t n = h.size();
  if (n < 4) return 0.5 * dx * (h[i] + h[i + 1]);
  if (i == 0) return dx / 24.0 * (9.0 * h[0] + 19.0 * h[1] - 5.0 * h[2] + h[3]);
  if (i + 2 == n) return dx / 24.0 * (h[n - 4] - 5.0 * h[n - 3] + 19.0 * h[n - 2] + 9.0 * h[n - 1]);
  return dx / 24.0 * (-h[i - 1] + 13.0 * h[i] + 13.0 * h[i + 1] - h[i + 2]);
}

std::vector<double> cumulative_from_start(const std::vector<double>& h, double dx) {
  std::vector<double> out(h.size(), 0.0);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) out[i + 1] = out[i] + panel(h, i, dx);
  return out;
}

// int_x^inf h, with the part beyond the last sample taken as h_N / (-kappa).
std::vector<double> cumulative_to_infinity(const std::vector<double>& h, double dx, double kappa) {
  std::vector<double> out(h.size(), 0.0);
  out.back() = h.back() / (-kappa);
  for (std::size_t i = h.size() - 1; i-- > 0;) out[i] = out[i + 1] + panel(h, i, dx);
  return out;
}

}  // namespace

HomogeneousBasis homogeneous_basis(const SecondOrderODE& eq, double r0, double r1, double tol,
                                   std::size_t samples) {
  if (!(r1 > r0)) throw Error(Errc::precondition, "empty span");
  const auto grid = ode::uniform_grid(r0, r1, samples);
  const double dx = grid[1] - grid[0];
  // State (y, y', log W) with (log W)' = -p.
  const ode::Rhs rhs = [&eq](double r, const Vector& y, Vector& dy) {
    dy(0) = y(1);
    dy(1) = -eq.p(r) * y(1) - eq.q(r) * y(0);
    dy(2) = -eq.p(r);
  };
  const std::array<std::array<double, 2>, 6> starts{{{1, 0}, {1, 1}, {1, 2}, {1, 4}, {0, 1}, {1, -1}}};
  std::optional<ode::Solution> best;
  double best_end = -1.0;
  for (const auto& s : starts) {
    Vector y0(3);
    y0 << s[0], s[1], 0.0;
    ode::Solution sol = ode::integrate(rhs, y0, grid, {tol, tol});
    bool positive = true;
    for (std::size_t i = 1; i < sol.y.size(); ++i) positive = positive && sol.y[i](0) > 0.0;
    if (positive && sol.y.back()(0) > best_end) {
      best_end = sol.y.back()(0);
      best = std::move(sol);
    }
  }
  if (!best) throw Error(Errc::ill_conditioned, "no sign-definite homogeneous solution on the span");

  HomogeneousBasis b;
  b.r = best->t;
  const std::size_t n = b.r.size();
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.dominant.push_back(best->y[i](0));
    b.d_dominant.push_back(best->y[i](1));
    b.wronskian.push_back(std::exp(best->y[i](2)));
    h[i] = b.wronskian[i] / (b.dominant[i] * b.dominant[i]);
  }
  if (b.dominant.front() <= 0.0) {
    // Solutions starting at y = 0: drop the first sample from the integrand's reach.
    h.front() = h[1];
  }
  const double kappa = -eq.p(b.r.back()) - 2.0 * b.d_dominant.back() / b.dominant.back();
  if (!(kappa < 0.0)) {
    throw Error(Errc::ill_conditioned, "Wronskian quotient does not decay; recessive solution undefined", b.r.back());
  }
  const std::vector<double> tail = cumulative_to_infinity(h, dx, kappa);
  for (std::size_t i = 0; i < n; ++i) {
    b.recessive.push_back(b.dominant[i] * tail[i]);
    b.d_recessive.push_back(b.d_dominant[i] * tail[i] - b.wronskian[i] / b.dominant[i]);
    const double c1 = std::hypot(b.recessive[i], b.d_recessive[i]);
    const double c2 = std::hypot(b.dominant[i], b.d_dominant[i]);
    b.condition.push_back(c1 * c2 / std::abs(b.wronskian[i]));
  }
  return b;
}

bool ExponentReport::matches(double tol) const {
  return std::abs(dominant.exponent - expected_dominant) <= tol &&
         std::abs(recessive.exponent - expected_recessive) <= tol;
}

ExponentReport homogeneous_asymptotics(const SecondOrderODE& eq, double r0, double r1, double tol) {
  const HomogeneousBasis b = homogeneous_basis(eq, r0, r1, tol);
  ExponentReport rep;
  rep.dominant = fit_decay_rate(b.r, abs_values(b.dominant));
  rep.recessive = fit_decay_rate(b.r, abs_values(b.recessive));
  if (eq.which == Unknown::for_v) {
    rep.expected_recessive = -2.0;
    rep.expected_dominant = 0.0;
  } else {
    rep.expected_recessive = 0.0;
    rep.expected_dominant = 1.0;
  }
  rep.conclusive = rep.dominant.r_squared >= 0.99 || rep.recessive.r_squared >= 0.99;
  return rep;
}

ParticularSolution variation_of_parameters(const SecondOrderODE& eq, double r0, double r1, double tol,
                                           double max_condition) {
  const HomogeneousBasis b = homogeneous_basis(eq, r0, r1, tol);
  const std::size_t n = b.r.size();
  const double dx = b.r[1] - b.r[0];
  ParticularSolution out;
  out.expected_exponent = eq.forcing_exponent;
  for (std::size_t i = 0; i < n; ++i) {
    out.max_condition = std::max(out.max_condition, b.condition[i]);
    if (!(b.condition[i] <= max_condition)) {
      throw Error(Errc::ill_conditioned, "fundamental matrix is nearly singular", b.r[i]);
    }
  }
  // y_p = A y_rec + B y_dom with A' = -y_dom F / W and B' = y_rec F / W.
  std::vector<double> ha(n), hb(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double fw = eq.forcing(b.r[i]) / b.wronskian[i];
    ha[i] = -b.dominant[i] * fw;
    hb[i] = b.recessive[i] * fw;
  }
  auto coefficient = [&](const std::vector<double>& h) {
    const std::vector<double> mag = abs_values(h);
    if (*std::max_element(mag.begin(), mag.end()) == 0.0) return std::vector<double>(n, 0.0);
    const std::optional<DecayFit> fit = try_fit(b.r, mag);
    if (fit && fit->exponent < 0.0) {
      std::vector<double> t = cumulative_to_infinity(h, dx, fit->exponent);
      for (double& x : t) x = -x;
      return t;
    }
    return cumulative_from_start(h, dx);
  };
  const std::vector<double> a = coefficient(ha);
  const std::vector<double> bb = coefficient(hb);
  out.r = b.r;
  for (std::size_t i = 0; i < n; ++i) {
    out.y.push_back(a[i] * b.recessive[i] + bb[i] * b.dominant[i]);
    out.dy.push_back(a[i] * b.d_recessive[i] + bb[i] * b.d_dominant[i]);
  }
  const std::vector<double> y_abs = abs_values(out.y);
  if (*std::max_element(y_abs.begin(), y_abs.end()) > 0.0) out.y_fit = fit_decay_rate(out.r, y_abs);
  out.det_fit = fit_decay_rate(out.r, abs_values(b.wronskian));
  return out;
}

// ---------------------------------------------------------------------------

PositivityVerdict positivity_persistence(const ModelSystemParams& p, double r1, const ModelRunOptions& opts) {
  const ModelTrajectory t = solve_model_system(p, r1, opts);
  PositivityVerdict v;
  v.halted = t.halted;
  v.min_u = *std::min_element(t.u.begin(), t.u.end());
  v.min_v = *std::min_element(t.v.begin(), t.v.end());
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    if (!(t.u[i] > 0.0) || !(t.v[i] > 0.0)) {
      v.positive = false;
      v.first_crossing = t.r[i];
      break;
    }
  }
  return v;
}

std::function<double(double)> interpolant(std::vector<double> t, std::vector<double> values) {
  if (t.size() != values.size() || t.empty()) throw Error(Errc::insufficient_data, "interpolant needs samples");
  return [t = std::move(t), v = std::move(values)](double s) {
    if (s <= t.front()) return v.front();
    if (s >= t.back()) return v.back();
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    const std::size_t i = static_cast<std::size_t>(it - t.begin()) - 1;
    const double w = (s - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - w) * v[i] + w * v[i + 1];
  };
}

ComparisonVerdict ode_compare(const ComparisonProblem& prob, double tol, std::size_t samples) {
  if (!(prob.t1 > prob.t0)) throw Error(Errc::precondition, "empty span");
  const auto grid = ode::uniform_grid(prob.t0, prob.t1, samples);
  for (double t : grid) {
    if (!(prob.a(t) > 0.0) || !(prob.b(t) > 0.0) || !(prob.c(t) > 0.0) || !(prob.d(t) > 0.0)) {
      throw Error(Errc::hypothesis_violation, "coefficients a, b, c, d must be positive", t);
    }
    if (prob.e(t) < 0.0 || prob.f(t) < 0.0) {
      throw Error(Errc::hypothesis_violation, "forcing terms e, f must be nonnegative", t);
    }
  }
  if (!(prob.x(prob.t0) < prob.u0) || !(prob.y(prob.t0) < prob.v0)) {
    throw Error(Errc::precondition, "initial ordering must be strict", prob.t0);
  }
  const ode::Rhs rhs = [&prob](double t, const Vector& s, Vector& ds) {
    ds(0) = prob.a(t) * s(0) + prob.b(t) * s(1) + prob.e(t);
    ds(1) = prob.c(t) * s(0) + prob.d(t) * s(1) + prob.f(t);
  };
  Vector s0(2);
  s0 << prob.u0, prob.v0;
  const ode::Solution sol = ode::integrate(rhs, s0, grid, {tol, tol});
  ComparisonVerdict out;
  out.t = sol.t;
  out.max_x_minus_u = -std::numeric_limits<double>::infinity();
  out.max_y_minus_v = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    const double t = sol.t[i];
    const double dx = prob.x(t) - sol.y[i](0);
    const double dy = prob.y(t) - sol.y[i](1);
    out.u.push_back(sol.y[i](0));
    out.v.push_back(sol.y[i](1));
    out.max_x_minus_u = std::max(out.max_x_minus_u, dx);
    out.max_y_minus_v = std::max(out.max_y_minus_v, dy);
    if ((dx > tol || dy > tol) && !out.first_violation) {
      out.holds = false;
      out.first_violation = t;
    }
  }
  return out;
}

FuzzSummary fuzz_ode_compare(std::uint64_t seed, std::size_t instances, double slack) {
  FuzzSummary sum;
  sum.seed = seed;
  sum.instances = instances;
  sum.slack = slack;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> base(0.1, 1.5), decay(0.0, 1.0), unit(0.0, 1.0);
  constexpr std::size_t kSamples = 256;
  for (std::size_t k = 0; k < instances; ++k) {
    FuzzRecord rec;
    rec.index = k;
    std::array<Coefficient, 6> coef;
    for (int j = 0; j < 6; ++j) {
      // a..d: positive constant part; e, f: nonnegative, sometimes absent.
      const double k0 = j < 4 ? base(rng) : (unit(rng) < 0.3 ? 0.0 : decay(rng));
      const double k1 = decay(rng);
      const double k2 = decay(rng);
      rec.coefficients.insert(rec.coefficients.end(), {k0, k1, k2});
      coef[static_cast<std::size_t>(j)] = [k0, k1, k2](double t) {
        const double e = std::exp(-t);
        return k0 + e * (k1 + e * k2);
      };
    }
    rec.t1 = 1.0 + 3.0 * unit(rng);
    rec.u0 = 0.5 + 1.5 * unit(rng);
    rec.v0 = 0.5 + 1.5 * unit(rng);
    rec.x0 = rec.u0 * (0.05 + 0.94 * unit(rng));
    rec.y0 = rec.v0 * (0.05 + 0.94 * unit(rng));
    rec.shrink_x = 0.05 + 0.94 * unit(rng);
    rec.shrink_y = 0.05 + 0.94 * unit(rng);

    const auto grid = ode::uniform_grid(0.0, rec.t1, kSamples);
    const ode::Rhs sub = [&coef, sx = rec.shrink_x, sy = rec.shrink_y](double t, const Vector& s, Vector& ds) {
      ds(0) = sx * (coef[0](t) * s(0) + coef[1](t) * s(1) + coef[4](t));
      ds(1) = sy * (coef[2](t) * s(0) + coef[3](t) * s(1) + coef[5](t));
    };
    Vector s0(2);
    s0 << rec.x0, rec.y0;
    const ode::Solution xs = ode::integrate(sub, s0, grid, {1e-10, 1e-10});
    std::vector<double> xv, yv;
    for (const auto& s : xs.y) {
      xv.push_back(s(0));
      yv.push_back(s(1));
    }
    ComparisonProblem prob{coef[0], coef[1], coef[2], coef[3], coef[4], coef[5],
                           interpolant(xs.t, xv), interpolant(xs.t, yv), rec.u0, rec.v0, 0.0, rec.t1};
    const ComparisonVerdict v = ode_compare(prob, slack, kSamples);
    rec.holds = v.holds;
    rec.max_x_minus_u = v.max_x_minus_u;
    rec.max_y_minus_v = v.max_y_minus_v;
    if (!v.holds) ++sum.violations;
    sum.records.push_back(std::move(rec));
  }
  return sum;
}

}  // namespace ahlab
