#include "ahlab/compactification.hpp"

#include "ahlab/comparison.hpp"
#include "ahlab/curvature.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/finite_difference.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>

namespace ahlab {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// The fiber block of a Fermi metric as a metric-valued function on (r, y).
CoordinateMetric fiber_chart(const FermiMetric& m) {
  CoordinateMetric c;
  c.dim = m.n + 1;
  c.jet = m.fiber_jet;
  c.radial_min = m.r_min;
  c.radial_max = m.r_max;
  c.label = m.label;
  return c;
}

CoordinateMetric fiber_chart(const CompactifiedMetric& m) {
  CoordinateMetric c;
  c.dim = m.n + 1;
  c.jet = m.fiber_jet;
  c.chart = Chart::compactified;
  c.radial_min = 0.0;
  c.radial_max = 1.0;
  c.label = m.label;
  return c;
}

double max_abs_vec(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

}  // namespace

CompactifiedMetric compactify_metric(const FermiMetric& metric) {
  CompactifiedMetric cm;
  cm.n = metric.n;
  cm.label = metric.label + " (compactified)";
  cm.provenance = "compactified from " + metric.label;
  auto src = std::make_shared<const FermiMetric>(metric);
  cm.source = src;
  cm.fiber_jet = [src](const Vector& x, int order) {
    const double rho = x(0);
    if (!(rho > 0.0) || rho > 1.0) throw Error(Errc::domain, "rho must lie in (0, 1]", rho);
    const double r = -std::log(rho);
    if (r < src->r_min || r > src->r_max) throw Error(Errc::out_of_span, "rho outside the source span", rho);
    Vector xs = x;
    xs(0) = r;
    const MetricJet s = src->fiber_jet(xs, order);
    const int dim = src->n + 1;
    MetricJet out;
    out.g = rho * rho * s.g;
    if (order >= 1 && !s.d1.empty()) {
      out.d1.resize(static_cast<std::size_t>(dim));
      out.d1[0] = 2.0 * rho * s.g - rho * s.d1[0];
      for (int k = 1; k < dim; ++k) out.d1[static_cast<std::size_t>(k)] = rho * rho * s.d1[static_cast<std::size_t>(k)];
    }
    if (order >= 2 && !s.d1.empty() && !s.d2.empty()) {
      out.d2.resize(static_cast<std::size_t>(dim * dim));
      auto at = [dim](int a, int b) { return static_cast<std::size_t>(a * dim + b); };
      out.d2[0] = 2.0 * s.g - 3.0 * s.d1[0] + s.d2[0];
      for (int k = 1; k < dim; ++k) {
        const Matrix m = 2.0 * rho * s.d1[static_cast<std::size_t>(k)] - rho * s.d2[at(k, 0)];
        out.d2[at(0, k)] = m;
        out.d2[at(k, 0)] = m;
        for (int l = 1; l < dim; ++l) out.d2[at(k, l)] = rho * rho * s.d2[at(k, l)];
      }
    }
    return out;
  };
  return cm;
}

ShapeSource shape_from_metric(const FermiMetric& metric) {
  return [fc = fiber_chart(metric)](const std::vector<double>& y, double r) -> Matrix {
    const MetricJet j = fc.evaluate(chart_coords(r, y), 1, 1e-4);
    return 0.5 * spd_inverse(j.g) * j.d1[0];
  };
}

double GbarDerivativeCell::sup_derivative() const {
  double s = max_abs(d_rho);
  for (const auto& d : d_tangential) s = std::max(s, max_abs(d));
  return s;
}

GbarDerivativeGrid gbar_derivative_grid(const CompactifiedMetric& cm, const std::vector<std::vector<double>>& ys,
                                        const std::vector<double>& rhos, const ShapeSource& shape) {
  const CoordinateMetric fc = fiber_chart(cm);
  GbarDerivativeGrid grid;
  for (const double rho : rhos) {
    if (!(rho > 0.0) || rho > 1.0) throw Error(Errc::domain, "grid rho must lie in (0, 1]", rho);
    for (const auto& y : ys) {
      if (static_cast<int>(y.size()) != cm.n) throw Error(Errc::dimension_mismatch, "grid point dimension");
      GbarDerivativeCell cell;
      cell.y = y;
      cell.rho = rho;
      const double h = 1e-3 * rho;
      try {
        const MetricJet j = fc.evaluate(chart_coords(rho, y), 1, h);
        cell.gbar = j.g;
        cell.d_rho = j.d1[0];
        cell.d_tangential.assign(j.d1.begin() + 1, j.d1.end());
        if (shape) {
          const Matrix S = shape(y, -std::log(rho));
          const Matrix I = Matrix::Identity(cm.n, cm.n);
          cell.d_rho_shape = (2.0 / rho) * (I - S).transpose() * j.g;
          auto g_at = [&](double t) -> Matrix { return cm.fiber(y, t); };
          const Matrix d1 = fd::derivative(g_at, rho, h, 0.0, 1.0);
          const Matrix d2 = fd::derivative(g_at, rho, 2.0 * h, 0.0, 1.0);
          cell.d_rho_direct = d1;
          cell.discrepancy = max_abs(*cell.d_rho_shape - d1);
          cell.fd_error = max_abs(d1 - d2) + 10.0 * kEps * max_abs(j.g) / h;
        }
        cell.finite = j.g.allFinite() && cell.d_rho.allFinite() &&
                      std::all_of(cell.d_tangential.begin(), cell.d_tangential.end(),
                                  [](const Matrix& m) { return m.allFinite(); });
      } catch (const Error&) {
        cell.finite = false;
      }
      if (!cell.finite) ++grid.flagged;
      grid.cells.push_back(std::move(cell));
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------

namespace {

struct Layout {
  int n;
  int idx(int mu, int a, int b) const { return (mu * n + a) * n + b; }
  int cube() const { return n * n * n; }

  Matrix block(const Vector& v, int mu) const {
    Matrix m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = v(idx(mu, a, b));
    return m;
  }
  void set_block(Vector& v, int mu, const Matrix& m) const {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v(idx(mu, a, b)) = m(a, b);
  }
};

// Linear maps of the system. S, gbar, rn are taken from the state `s`.
Vector apply_A(const ExtendedState& s, const Vector& dW) {
  const int n = static_cast<int>(s.S.rows());
  const Layout L{n};
  const Matrix E = s.S - Matrix::Identity(n, n);
  Vector out(L.cube());
  for (int mu = 0; mu < n; ++mu) {
    const Matrix w = L.block(dW, mu);
    L.set_block(out, mu, -w * E - E * w);
  }
  return out;
}

Vector apply_B(const ExtendedState& s, const Vector& dgbar) {
  const int n = static_cast<int>(s.S.rows());
  const Layout L{n};
  const double e2 = std::exp(2.0 * s.r);
  const Matrix gbar = std::exp(-2.0 * s.r) * s.g;
  const Matrix gbar_inv = spd_inverse(gbar);
  const Matrix K = s.rn + Matrix::Identity(n, n);
  // Gamma^sigma_{mu alpha} = 1/2 gbar^{sigma lambda}(d_mu gbar_{lambda alpha} + d_alpha gbar_{lambda mu} - d_lambda gbar_{mu alpha}).
  std::vector<double> gam(static_cast<std::size_t>(n * n * n), 0.0);
  auto G = [&](int sg, int mu, int al) -> double& { return gam[static_cast<std::size_t>((sg * n + mu) * n + al)]; };
  for (int sg = 0; sg < n; ++sg)
    for (int mu = 0; mu < n; ++mu)
      for (int al = 0; al < n; ++al) {
        double acc = 0.0;
        for (int la = 0; la < n; ++la) {
          acc += gbar_inv(sg, la) *
                 (dgbar(L.idx(mu, la, al)) + dgbar(L.idx(al, la, mu)) - dgbar(L.idx(la, mu, al)));
        }
        G(sg, mu, al) = 0.5 * acc;
      }
  Vector out = Vector::Zero(L.cube());
  for (int mu = 0; mu < n; ++mu)
    for (int be = 0; be < n; ++be)
      for (int al = 0; al < n; ++al) {
        double acc = 0.0;
        for (int sg = 0; sg < n; ++sg) acc += -G(sg, mu, al) * K(be, sg) + G(be, mu, sg) * K(sg, al);
        out(L.idx(mu, be, al)) = e2 * acc;
      }
  return out;
}

Vector apply_C(const ExtendedState& s, const Vector& dW) {
  const int n = static_cast<int>(s.S.rows());
  const Layout L{n};
  const double em2 = std::exp(-2.0 * s.r);
  const Matrix gbar = em2 * s.g;
  Vector out(L.cube());
  for (int mu = 0; mu < n; ++mu) {
    const Matrix w = L.block(dW, mu);
    L.set_block(out, mu, em2 * (w.transpose() * gbar + gbar * w));
  }
  return out;
}

Vector apply_D(const ExtendedState& s, const Vector& dgbar) {
  const int n = static_cast<int>(s.S.rows());
  const Layout L{n};
  const Matrix E = s.S - Matrix::Identity(n, n);
  Vector out(L.cube());
  for (int mu = 0; mu < n; ++mu) {
    const Matrix d = L.block(dgbar, mu);
    L.set_block(out, mu, E.transpose() * d + d * E);
  }
  return out;
}

Matrix assemble(const std::function<Vector(const Vector&)>& op, int size) {
  Matrix m(size, size);
  for (int k = 0; k < size; ++k) m.col(k) = op(Vector::Unit(size, k));
  return m;
}

// R_N and the remainder F = -d_mu R_N + Gamma^s_{mu a}(I + R_N)^b_s - Gamma^b_{mu s}(I + R_N)^s_a
// along the geodesic y = y0, with the source's own Christoffel symbols.
class CurvatureProbe {
 public:
  CurvatureProbe(const FermiMetric& src, std::vector<double> y0, double step)
      : src_(src), fc_(fiber_chart(src)), y0_(std::move(y0)), step_(step) {}

  bool analytic() const { return static_cast<bool>(src_.normal_curvature); }

  void at(double r, Matrix& rn, Vector& remainder) const {
    const int n = src_.n;
    const Layout L{n};
    std::vector<Matrix> d_rn;
    if (analytic()) {
      NormalCurvatureJet j = src_.normal_curvature(chart_coords(r, y0_));
      rn = j.rn;
      d_rn = std::move(j.d_tangential);
    } else {
      rn = normal_curvature(src_, y0_, r, step_);
      for (int mu = 0; mu < n; ++mu) {
        auto rn_at = [&](double t) -> Matrix {
          std::vector<double> y = y0_;
          y[static_cast<std::size_t>(mu)] = t;
          return normal_curvature(src_, y, r, step_);
        };
        d_rn.push_back(fd::derivative(rn_at, y0_[static_cast<std::size_t>(mu)], step_));
      }
    }
    const MetricJet j = fc_.evaluate(chart_coords(r, y0_), 1, step_);
    const Matrix gi = spd_inverse(j.g);
    auto dg = [&](int mu, int a, int b) { return j.d1[static_cast<std::size_t>(mu + 1)](a, b); };
    auto gamma = [&](int sg, int mu, int al) {
      double acc = 0.0;
      for (int la = 0; la < n; ++la) acc += gi(sg, la) * (dg(mu, la, al) + dg(al, la, mu) - dg(la, mu, al));
      return 0.5 * acc;
    };
    const Matrix K = rn + Matrix::Identity(n, n);
    remainder.resize(L.cube());
    for (int mu = 0; mu < n; ++mu)
      for (int be = 0; be < n; ++be)
        for (int al = 0; al < n; ++al) {
          double acc = -d_rn[static_cast<std::size_t>(mu)](be, al);
          for (int sg = 0; sg < n; ++sg) acc += gamma(sg, mu, al) * K(be, sg) - gamma(be, mu, sg) * K(sg, al);
          remainder(L.idx(mu, be, al)) = acc;
        }
  }

 private:
  const FermiMetric& src_;
  CoordinateMetric fc_;
  std::vector<double> y0_;
  double step_;
};

}  // namespace

TangentialCoefficients assemble_coefficients(const ExtendedState& s) {
  const int size = static_cast<int>(s.dW.size());
  if (s.rn.size() == 0 || s.remainder.size() != size) {
    throw Error(Errc::insufficient_data, "state carries no curvature samples", s.r);
  }
  TangentialCoefficients c;
  c.A = assemble([&](const Vector& v) { return apply_A(s, v); }, size);
  c.B = assemble([&](const Vector& v) { return apply_B(s, v); }, size);
  c.C = assemble([&](const Vector& v) { return apply_C(s, v); }, size);
  c.D = assemble([&](const Vector& v) { return apply_D(s, v); }, size);
  c.G = std::exp(2.0 * s.r) * s.remainder;
  return c;
}

TangentialTrajectory integrate_tangential_system(const FermiMetric& source, const std::vector<double>& y0, double r0,
                                                 double r1, const TangentialOptions& opts) {
  const int n = source.n;
  if (static_cast<int>(y0.size()) != n) throw Error(Errc::dimension_mismatch, "y0 dimension");
  if (!(opts.tol > 0.0)) throw Error(Errc::precondition, "tolerance must be positive");
  if (!(r1 > r0)) throw Error(Errc::precondition, "empty span");
  const Layout L{n};
  const int nn = n * n, cube = L.cube();
  const CurvatureProbe probe(source, y0, opts.step);

  // Initial data from the source jet: S = g^{-1} g_r / 2 and its tangential derivatives.
  const CoordinateMetric fc = fiber_chart(source);
  const MetricJet j0 = fc.evaluate(chart_coords(r0, y0), 2, opts.step);
  const Matrix gi = spd_inverse(j0.g);
  const Matrix S0 = 0.5 * gi * j0.d1[0];
  Vector y(2 * nn + 2 * cube);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      y(a * n + b) = S0(a, b);
      y(nn + a * n + b) = j0.g(a, b);
    }
  for (int mu = 0; mu < n; ++mu) {
    const Matrix& gmu = j0.d1[static_cast<std::size_t>(mu + 1)];
    const Matrix& gmur = j0.d2[static_cast<std::size_t>((mu + 1) * (n + 1))];
    const Matrix dS = 0.5 * gi * (gmur - gmu * gi * j0.d1[0]);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        y(2 * nn + L.idx(mu, a, b)) = std::exp(2.0 * r0) * dS(a, b);
        y(2 * nn + cube + L.idx(mu, a, b)) = std::exp(-2.0 * r0) * gmu(a, b);
      }
  }

  auto unpack = [n, nn, cube](double r, const Vector& v) {
    ExtendedState s;
    s.r = r;
    s.S.resize(n, n);
    s.g.resize(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        s.S(a, b) = v(a * n + b);
        s.g(a, b) = v(nn + a * n + b);
      }
    s.dW = v.segment(2 * nn, cube);
    s.dgbar = v.segment(2 * nn + cube, cube);
    return s;
  };

  const ode::Rhs rhs = [&](double r, const Vector& v, Vector& dv) {
    ExtendedState s = unpack(r, v);
    probe.at(r, s.rn, s.remainder);
    const Matrix dS = -s.S * s.S - s.rn;
    const Matrix dg = s.g * s.S + s.S.transpose() * s.g;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        dv(a * n + b) = dS(a, b);
        dv(nn + a * n + b) = dg(a, b);
      }
    dv.segment(2 * nn, cube) = apply_A(s, s.dW) + apply_B(s, s.dgbar) + std::exp(2.0 * r) * s.remainder;
    dv.segment(2 * nn + cube, cube) = apply_C(s, s.dW) + apply_D(s, s.dgbar);
  };
  const ode::Guard guard = [&](double r, const Vector& v) -> std::optional<std::string> {
    const ExtendedState s = unpack(r, v);
    if (!is_spd(s.g)) throw Error(Errc::convexity_loss, "metric lost positive definiteness", r);
    if (!(self_adjoint_eigen_range(s.S, s.g).min > 0.0)) {
      throw Error(Errc::convexity_loss, "shape operator lost positivity", r);
    }
    return std::nullopt;
  };
  // Components span many orders of magnitude; control relative error only.
  const ode::Options o{opts.tol, opts.tol * 1e-20};
  const ode::Solution sol = ode::integrate(rhs, y, ode::uniform_grid(r0, r1, opts.samples), o, guard);

  TangentialTrajectory t;
  t.n = n;
  t.source = source.label;
  t.curvature_provenance = probe.analytic() ? "analytic" : "finite differences";
  for (std::size_t i = 0; i < sol.t.size(); ++i) {
    ExtendedState s = unpack(sol.t[i], sol.y[i]);
    probe.at(s.r, s.rn, s.remainder);
    const double m = max_abs_vec(s.dgbar);
    t.sup_dgbar = std::max(t.sup_dgbar, m);
    if (m > 0.0) {
      double defect = 0.0;
      for (int mu = 0; mu < n; ++mu) {
        const Matrix d = L.block(s.dgbar, mu);
        defect = std::max(defect, max_abs(d - d.transpose()));
      }
      t.max_symmetry_defect = std::max(t.max_symmetry_defect, defect / m);
    }
    t.samples.push_back(std::move(s));
  }
  return t;
}

// ---------------------------------------------------------------------------

bool CoefBoundsReport::all_pass() const {
  return !fits.empty() && std::all_of(fits.begin(), fits.end(), [](const CoefficientFit& f) { return f.pass; });
}

namespace {

struct NormSeries {
  std::vector<double> r;
  std::array<std::vector<double>, 5> norms;  // A, B, C, D, G
};

NormSeries coefficient_norms(const TangentialTrajectory& traj) {
  if (traj.samples.empty()) throw Error(Errc::insufficient_data, "empty trajectory");
  NormSeries ns;
  for (const auto& s : traj.samples) {
    const TangentialCoefficients c = assemble_coefficients(s);
    ns.r.push_back(s.r);
    ns.norms[0].push_back(spectral_norm(c.A));
    ns.norms[1].push_back(spectral_norm(c.B));
    ns.norms[2].push_back(spectral_norm(c.C));
    ns.norms[3].push_back(spectral_norm(c.D));
    ns.norms[4].push_back(c.G.norm());
  }
  return ns;
}

std::array<double, 5> targets(double Omega) { return {-1.0, 1.0, -2.0, -1.0, 2.0 + Omega}; }

}  // namespace

CoefBoundsReport coefficient_bounds(const TangentialTrajectory& traj, double Omega) {
  const NormSeries ns = coefficient_norms(traj);
  const auto tg = targets(Omega);
  const std::array<const char*, 5> names{"A", "B", "C", "D", "G"};
  CoefBoundsReport rep;
  rep.Omega = Omega;
  for (std::size_t k = 0; k < 5; ++k) {
    CoefficientFit f;
    f.name = names[k];
    f.target = tg[k];
    const auto& q = ns.norms[k];
    for (std::size_t i = 0; i < q.size(); ++i) f.constant = std::max(f.constant, q[i] * std::exp(-f.target * ns.r[i]));
    if (*std::max_element(q.begin(), q.end()) <= 1e-12) {
      f.vanishes = true;
      f.conclusive = true;
      f.pass = true;
    } else {
      try {
        f.fit = fit_decay_rate(ns.r, q);
        f.conclusive = f.fit->r_squared >= 0.99;
        f.pass = f.conclusive && f.fit->exponent <= f.target + 0.1;
      } catch (const Error&) {
        f.conclusive = false;
      }
    }
    rep.fits.push_back(std::move(f));
  }
  return rep;
}

DominanceReport model_dominance(const TangentialTrajectory& traj, double Omega) {
  const NormSeries ns = coefficient_norms(traj);
  const auto tg = targets(Omega);
  DominanceReport rep;
  for (std::size_t i = 0; i < ns.r.size(); ++i)
    for (std::size_t k = 0; k < 5; ++k) rep.c = std::max(rep.c, ns.norms[k][i] * std::exp(-tg[k] * ns.r[i]));
  ModelSystemParams p;
  p.c = rep.c;
  p.Omega = Omega;
  p.r0 = traj.samples.front().r;
  p.u0 = 1.01 * traj.samples.front().dW.norm() + 1e-12;
  p.v0 = 1.01 * traj.samples.front().dgbar.norm() + 1e-12;
  ModelRunOptions opts;
  opts.samples = traj.samples.size();
  opts.cap = std::numeric_limits<double>::infinity();
  opts.tol = 1e-10;
  const ModelTrajectory m = solve_model_system(p, traj.samples.back().r, opts);
  rep.holds = m.r.size() == traj.samples.size();
  for (std::size_t i = 0; i < m.r.size() && i < traj.samples.size(); ++i) {
    const double rw = traj.samples[i].dW.norm() / m.u[i];
    const double rg = traj.samples[i].dgbar.norm() / m.v[i];
    rep.max_ratio_w = std::max(rep.max_ratio_w, rw);
    rep.max_ratio_gbar = std::max(rep.max_ratio_gbar, rg);
  }
  rep.holds = rep.holds && rep.max_ratio_w <= 1.0 && rep.max_ratio_gbar <= 1.0;
  return rep;
}

// ---------------------------------------------------------------------------

std::string to_string(LipschitzVerdict v) {
  switch (v) {
    case LipschitzVerdict::lipschitz: return "LIPSCHITZ";
    case LipschitzVerdict::log_blowup: return "LOG_BLOWUP";
    case LipschitzVerdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

LipschitzReport lipschitz_verdict(const std::vector<double>& rho, const std::vector<double>& sup) {
  if (rho.size() != sup.size()) throw Error(Errc::dimension_mismatch, "rho and sup sizes differ");
  LipschitzReport rep;
  if (rho.size() < 3) {
    rep.diagnostics = "fewer than 3 samples";
    return rep;
  }
  rep.rho_lo = *std::min_element(rho.begin(), rho.end());
  rep.rho_hi = *std::max_element(rho.begin(), rho.end());
  std::vector<double> L, s, log_s;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (!(rho[i] > 0.0) || !std::isfinite(sup[i])) {
      rep.diagnostics = "non-finite derivative sample";
      rep.bound = std::numeric_limits<double>::infinity();
      return rep;
    }
    L.push_back(-std::log(rho[i]));
    s.push_back(sup[i]);
    rep.bound = std::max(rep.bound, sup[i]);
  }
  if (rep.bound == 0.0) {
    rep.verdict = LipschitzVerdict::lipschitz;
    rep.r_squared = 1.0;
    rep.diagnostics = "derivatives vanish";
    return rep;
  }
  const LinearFit affine = fit_line(L, s);
  rep.slope = affine.slope;
  rep.r_squared = affine.r_squared;
  bool positive = true;
  for (double v : s) {
    positive = positive && v > 0.0;
    log_s.push_back(v > 0.0 ? std::log(v) : 0.0);
  }
  if (positive) {
    rep.power_slope = fit_line(L, log_s).slope;
    if (rep.power_slope <= 0.02) {
      rep.verdict = LipschitzVerdict::lipschitz;
      rep.diagnostics = "sup bounded across the window";
      return rep;
    }
  }
  if (affine.slope > 0.0 && affine.r_squared >= 0.99) {
    rep.verdict = LipschitzVerdict::log_blowup;
    rep.diagnostics = "sup affine in log(1/rho)";
    return rep;
  }
  rep.diagnostics = positive ? "sup grows but not affinely in log(1/rho)" : "sup vanishes at some samples";
  return rep;
}

LipschitzReport lipschitz_verdict(const GbarDerivativeGrid& grid) {
  // Series keyed by (y, direction); direction 0 is rho, mu >= 1 tangential.
  std::map<std::pair<std::vector<double>, int>, std::map<double, double>> series;
  double bound = 0.0;
  bool finite = true;
  for (const auto& c : grid.cells) {
    if (!c.finite) {
      finite = false;
      continue;
    }
    for (int k = 0; k <= static_cast<int>(c.d_tangential.size()); ++k) {
      const double v = k == 0 ? max_abs(c.d_rho) : max_abs(c.d_tangential[static_cast<std::size_t>(k - 1)]);
      series[{c.y, k}][c.rho] = v;
      bound = std::max(bound, v);
    }
  }
  if (!finite || series.empty()) {
    LipschitzReport rep;
    rep.bound = finite ? 0.0 : std::numeric_limits<double>::infinity();
    rep.diagnostics = finite ? "empty grid" : "non-finite derivative sample";
    return rep;
  }
  std::optional<LipschitzReport> worst;
  for (const auto& [key, by_rho] : series) {
    std::vector<double> rho, sup;
    double peak = 0.0;
    for (const auto& [r, v] : by_rho) {
      rho.push_back(r);
      sup.push_back(v);
      peak = std::max(peak, v);
    }
    // Series at roundoff level relative to the grid (e.g. sin(pi) != 0) carry no signal.
    if (peak <= 1e-10 * bound) std::fill(sup.begin(), sup.end(), 0.0);
    LipschitzReport rep = lipschitz_verdict(rho, sup);
    auto rank = [](const LipschitzReport& r) {
      return r.verdict == LipschitzVerdict::lipschitz ? 0 : (r.verdict == LipschitzVerdict::inconclusive ? 1 : 2);
    };
    if (!worst || rank(rep) > rank(*worst) ||
        (rank(rep) == rank(*worst) && rep.slope > worst->slope)) {
      std::string where = "y = (";
      for (std::size_t i = 0; i < key.first.size(); ++i) where += (i ? ", " : "") + std::to_string(key.first[i]);
      where += "), direction " + std::to_string(key.second);
      rep.diagnostics += "; worst series at " + where;
      worst = std::move(rep);
    }
  }
  worst->bound = bound;
  return *worst;
}

LipschitzReport lipschitz_verdict(const TangentialTrajectory& traj) {
  std::vector<double> rho, sup;
  for (const auto& s : traj.samples) {
    const double r = std::exp(-s.r);
    const Matrix gbar = std::exp(-2.0 * s.r) * s.g;
    const Matrix I = Matrix::Identity(traj.n, traj.n);
    const Matrix d_rho = (2.0 / r) * (I - s.S).transpose() * gbar;
    rho.push_back(r);
    sup.push_back(std::max(max_abs(d_rho), max_abs_vec(s.dgbar)));
  }
  return lipschitz_verdict(rho, sup);
}

}  // namespace ahlab
