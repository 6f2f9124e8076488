#include "ahlab/gallery.hpp"

#include "ahlab/curvature.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/finite_difference.hpp"
#include "ahlab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace ahlab {

Matrix round_sphere_metric(const std::vector<double>& y) {
  const auto n = static_cast<Eigen::Index>(y.size());
  Matrix g = Matrix::Zero(n, n);
  double w = 1.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    g(k, k) = w;
    const double s = std::sin(y[static_cast<std::size_t>(k)]);
    w *= s * s;
  }
  return g;
}

namespace {

// d/dtheta_m and d^2/dtheta_m dtheta_p of the diagonal entry k of the round metric.
double round_entry(const std::vector<double>& y, std::size_t k, int dm, int dp) {
  double v = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double th = y[j];
    const int order = (static_cast<int>(j) == dm) + (static_cast<int>(j) == dp);
    if (order == 0) {
      v *= std::sin(th) * std::sin(th);
    } else if (order == 1) {
      v *= std::sin(2.0 * th);
    } else {
      v *= 2.0 * std::cos(2.0 * th);
    }
  }
  const bool in_range = (dm < 0 || dm < static_cast<int>(k)) && (dp < 0 || dp < static_cast<int>(k));
  return in_range ? v : 0.0;
}

std::vector<double> fiber_coords(const Vector& x) {
  return std::vector<double>(x.data() + 1, x.data() + x.size());
}

NormalCurvatureJet constant_normal_curvature(int n) {
  NormalCurvatureJet j;
  j.rn = -Matrix::Identity(n, n);
  j.d_tangential.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
  return j;
}

}  // namespace

FermiMetric make_hyperbolic(int n, HyperbolicFiber fiber) {
  if (n < 1) throw Error(Errc::precondition, "fiber dimension must be at least 1");
  FermiMetric m;
  m.n = n;
  m.normal_curvature = [n](const Vector&) { return constant_normal_curvature(n); };
  const int dim = n + 1;
  if (fiber == HyperbolicFiber::flat_torus) {
    m.label = "hyperbolic (flat torus fiber)";
    m.fiber_jet = [n, dim](const Vector& x, int order) {
      const double e = std::exp(2.0 * x(0));
      const Matrix id = Matrix::Identity(n, n);
      MetricJet j;
      j.g = e * id;
      if (order >= 1) {
        j.d1.assign(static_cast<std::size_t>(dim), Matrix::Zero(n, n));
        j.d1[0] = 2.0 * e * id;
      }
      if (order >= 2) {
        j.d2.assign(static_cast<std::size_t>(dim * dim), Matrix::Zero(n, n));
        j.d2[0] = 4.0 * e * id;
      }
      return j;
    };
    return m;
  }
  m.label = "hyperbolic (round fiber)";
  m.fiber_jet = [n, dim](const Vector& x, int order) {
    const double r = x(0);
    const double sh2 = std::sinh(r) * std::sinh(r);
    const std::vector<double> y = fiber_coords(x);
    auto round_d = [&](int dm, int dp) {
      Matrix d = Matrix::Zero(n, n);
      for (int k = 0; k < n; ++k) d(k, k) = round_entry(y, static_cast<std::size_t>(k), dm, dp);
      return d;
    };
    const Matrix g0 = round_d(-1, -1);
    MetricJet j;
    j.g = sh2 * g0;
    if (order >= 1) {
      j.d1.resize(static_cast<std::size_t>(dim));
      j.d1[0] = std::sinh(2.0 * r) * g0;
      for (int mu = 1; mu < dim; ++mu) j.d1[static_cast<std::size_t>(mu)] = sh2 * round_d(mu - 1, -1);
    }
    if (order >= 2) {
      j.d2.resize(static_cast<std::size_t>(dim * dim));
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          Matrix d;
          if (a == 0 && b == 0) {
            d = 2.0 * std::cosh(2.0 * r) * g0;
          } else if (a == 0 || b == 0) {
            d = std::sinh(2.0 * r) * round_d(std::max(a, b) - 1, -1);
          } else {
            d = sh2 * round_d(a - 1, b - 1);
          }
          j.d2[static_cast<std::size_t>(a * dim + b)] = d;
        }
    }
    return j;
  };
  return m;
}

Profile Profile::sine() {
  return {[](double y) { return std::sin(y); }, [](double y) { return std::cos(y); },
          [](double y) { return -std::sin(y); }};
}

Profile Profile::zero() {
  auto z = [](double) { return 0.0; };
  return {z, z, z};
}

FermiMetric make_perturbed_ah(int n, Profile psi, double omega) {
  if (n < 1) throw Error(Errc::precondition, "fiber dimension must be at least 1");
  if (!(omega > 0.0)) throw Error(Errc::precondition, "omega must be positive");
  FermiMetric m;
  m.n = n;
  m.label = "perturbed AH (omega = " + std::to_string(omega) + ")";
  const int dim = n + 1;
  m.fiber_jet = [n, dim, psi, omega](const Vector& x, int order) {
    // g = e^{phi} delta with phi = 2r + 2 psi(y^1) e^{-omega r}.
    const double r = x(0), y = x(1);
    const double e = std::exp(-omega * r);
    const double p = psi.f(y), dp = psi.df(y), ddp = psi.ddf(y);
    const double phi = 2.0 * r + 2.0 * p * e;
    std::array<double, 2> d{2.0 - 2.0 * omega * p * e, 2.0 * dp * e};
    const double drr = 2.0 * omega * omega * p * e;
    const double dry = -2.0 * omega * dp * e;
    const double dyy = 2.0 * ddp * e;
    const double g = std::exp(phi);
    const Matrix id = Matrix::Identity(n, n);
    MetricJet j;
    j.g = g * id;
    if (order >= 1) {
      j.d1.assign(static_cast<std::size_t>(dim), Matrix::Zero(n, n));
      j.d1[0] = g * d[0] * id;
      j.d1[1] = g * d[1] * id;
    }
    if (order >= 2) {
      j.d2.assign(static_cast<std::size_t>(dim * dim), Matrix::Zero(n, n));
      j.d2[0] = g * (d[0] * d[0] + drr) * id;
      j.d2[1] = j.d2[static_cast<std::size_t>(dim)] = g * (d[0] * d[1] + dry) * id;
      j.d2[static_cast<std::size_t>(dim + 1)] = g * (d[1] * d[1] + dyy) * id;
    }
    return j;
  };
  m.normal_curvature = [n, psi, omega](const Vector& x) {
    // S = s I with s = 1 - omega psi e^{-omega r}; R_N = -(s' + s^2) I.
    const double r = x(0), y = x(1);
    const double e = std::exp(-omega * r);
    const double p = psi.f(y), dp = psi.df(y);
    const double s = 1.0 - omega * p * e;
    const double q = omega * omega * p * e + s * s;
    const double dq = omega * omega * dp * e - 2.0 * s * omega * dp * e;
    NormalCurvatureJet j;
    j.rn = -q * Matrix::Identity(n, n);
    j.d_tangential.assign(static_cast<std::size_t>(n), Matrix::Zero(n, n));
    j.d_tangential[0] = -dq * Matrix::Identity(n, n);
    return j;
  };
  return m;
}

double perturbed_gbar_dy(const Profile& psi, double omega, double y1, double rho) {
  const double rw = std::pow(rho, omega);
  return 2.0 * psi.df(y1) * rw * std::exp(2.0 * psi.f(y1) * rw);
}

double perturbed_shape(const Profile& psi, double omega, double y1, double r) {
  return 1.0 - omega * psi.f(y1) * std::exp(-omega * r);
}

// ---------------------------------------------------------------------------
// Mollifier. On 1/2 <= x <= 1 with t = 2x - 1:
//   eta'(x) = P(t) = (1 - t)^3 (1 + 3t + 6t^2 + 70t^3)
//          = 1 + 60t^3 - 195t^4 + 204t^5 - 70t^6,
//   eta(x)  = 1/2 + (t + 15t^4 - 39t^5 + 34t^6 - 10t^7) / 2.

namespace {

double poly_p(double t) {
  return 1.0 + t * t * t * (60.0 + t * (-195.0 + t * (204.0 - 70.0 * t)));
}
double poly_dp(double t) {
  return t * t * (180.0 + t * (-780.0 + t * (1020.0 - 420.0 * t)));
}
double poly_ddp(double t) {
  return t * (360.0 + t * (-2340.0 + t * (4080.0 - 2100.0 * t)));
}
double poly_q(double t) {
  return t * (1.0 + t * t * t * (15.0 + t * (-39.0 + t * (34.0 - 10.0 * t))));
}

}  // namespace

Mollifier::Mollifier() {
  constexpr int kSamples = 100000;
  for (int i = 0; i <= kSamples; ++i) {
    const double x = 0.5 + 0.5 * i / kSamples;
    c1_ = std::max(c1_, std::abs(d1(x)));
    c2_ = std::max(c2_, std::abs(d2(x)));
    c3_ = std::max(c3_, std::abs(d3(x)));
  }
}

double Mollifier::value(double x) const {
  const double a = std::abs(x);
  if (a <= 0.5) return x;
  const double sign = x < 0 ? -1.0 : 1.0;
  if (a >= 1.0) return sign;
  return sign * (0.5 + 0.5 * poly_q(2.0 * a - 1.0));
}

double Mollifier::d1(double x) const {
  const double a = std::abs(x);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return poly_p(2.0 * a - 1.0);
}

double Mollifier::d2(double x) const {
  const double a = std::abs(x);
  if (a <= 0.5 || a >= 1.0) return 0.0;
  const double sign = x < 0 ? -1.0 : 1.0;
  return sign * 2.0 * poly_dp(2.0 * a - 1.0);
}

double Mollifier::d3(double x) const {
  const double a = std::abs(x);
  if (a <= 0.5 || a >= 1.0) return 0.0;
  return 4.0 * poly_ddp(2.0 * a - 1.0);
}

// ---------------------------------------------------------------------------

CounterexampleJet counterexample_f(const CounterexampleMetric& cm, double y, double rho,
                                   int order) {
  if (!(rho > 0.0) || rho > 1.0) throw Error(Errc::domain, "rho must lie in (0, 1]", rho);
  const double sy = std::sin(y), cy = std::cos(y);
  const double x_rho = sy / rho;
  const double t_lo = std::log(rho);
  std::vector<double> breaks;
  if (sy != 0.0) {
    breaks.push_back(std::log(std::abs(sy)));
    breaks.push_back(std::log(2.0 * std::abs(sy)));
  }
  // Each integral carries a factor 2, so integrate to half the tolerance.
  const double tol = 0.5 * cm.quad_tol;
  const Mollifier& eta = cm.eta;

  CounterexampleJet j;
  j.f = 2.0 * adaptive_simpson(
                  [&](double t) {
                    const double s = std::exp(t);
                    return eta(sy / s) * s;
                  },
                  t_lo, 0.0, breaks, tol)
                  .value;
  if (order < 1) return j;
  j.f_rho = -2.0 * eta(x_rho);
  j.f_y = 2.0 * cy *
          adaptive_simpson([&](double t) { return eta.d1(sy * std::exp(-t)); }, t_lo, 0.0, breaks,
                           tol / std::max(std::abs(cy), 1e-300))
              .value;
  if (cy == 0.0) j.f_y = 0.0;
  if (order < 2) return j;
  j.f_rho_rho = 2.0 * eta.d1(x_rho) * sy / (rho * rho);
  j.f_y_rho = -2.0 * cy / rho * eta.d1(x_rho);
  j.f_y_y = 2.0 * adaptive_simpson(
                      [&](double t) {
                        const double inv_s = std::exp(-t);
                        const double x = sy * inv_s;
                        return cy * cy * eta.d2(x) * inv_s - sy * eta.d1(x);
                      },
                      t_lo, 0.0, breaks, tol)
                      .value;
  return j;
}

CompactifiedMetric make_counterexample_metric(const CounterexampleMetric& cm) {
  if (cm.n < 1) throw Error(Errc::precondition, "fiber dimension must be at least 1");
  if (cm.alpha0 < 1 || cm.alpha0 > cm.n) {
    throw Error(Errc::precondition, "distinguished index must be in 1..n");
  }
  CompactifiedMetric m;
  m.n = cm.n;
  m.label = "counterexample";
  m.provenance = "native";
  const int n = cm.n, dim = cm.n + 1, a0 = cm.alpha0;
  m.fiber_jet = [cm, n, dim, a0](const Vector& x, int order) {
    const CounterexampleJet f = counterexample_f(cm, x(a0), x(0), order);
    const double e = std::exp(f.f);
    const Matrix id = Matrix::Identity(n, n);
    // First derivatives of f by coordinate; zero except rho and y^{alpha0}.
    std::vector<double> df(static_cast<std::size_t>(dim), 0.0);
    df[0] = f.f_rho;
    df[static_cast<std::size_t>(a0)] = f.f_y;
    auto ddf = [&](int a, int b) {
      if (a > b) std::swap(a, b);
      if (a == 0 && b == 0) return f.f_rho_rho;
      if (a == 0 && b == a0) return f.f_y_rho;
      if (a == a0 && b == a0) return f.f_y_y;
      return 0.0;
    };
    MetricJet j;
    j.g = e * id;
    if (order >= 1) {
      for (int k = 0; k < dim; ++k) j.d1.push_back(e * df[static_cast<std::size_t>(k)] * id);
    }
    if (order >= 2) {
      for (int a = 0; a < dim; ++a)
        for (int b = 0; b < dim; ++b) {
          j.d2.push_back(
              e * (df[static_cast<std::size_t>(a)] * df[static_cast<std::size_t>(b)] + ddf(a, b)) *
              id);
        }
    }
    return j;
  };
  return m;
}

// ---------------------------------------------------------------------------

DenseTensor<4> christoffel_derivative(const MetricJet& jet) {
  if (jet.order() < 2) throw Error(Errc::insufficient_data, "Christoffel derivative needs a 2-jet");
  const int dim = static_cast<int>(jet.g.rows());
  const auto u = [](int i) { return static_cast<std::size_t>(i); };
  const Matrix gi = spd_inverse(jet.g);
  // Gamma_{lij} and its derivatives.
  DenseTensor<3> low(dim);
  DenseTensor<4> dlow(dim);
  for (int l = 0; l < dim; ++l)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        low(l, i, j) = 0.5 * (jet.d1[u(i)](l, j) + jet.d1[u(j)](l, i) - jet.d1[u(l)](i, j));
        for (int m = 0; m < dim; ++m) {
          dlow(m, l, i, j) = 0.5 * (jet.d2[u(m * dim + i)](l, j) + jet.d2[u(m * dim + j)](l, i) -
                                    jet.d2[u(m * dim + l)](i, j));
        }
      }
  DenseTensor<4> out(dim);
  for (int m = 0; m < dim; ++m) {
    const Matrix dgi = -gi * jet.d1[u(m)] * gi;
    for (int k = 0; k < dim; ++k)
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          double v = 0.0;
          for (int l = 0; l < dim; ++l) v += dgi(k, l) * low(l, i, j) + gi(k, l) * dlow(m, l, i, j);
          out(m, k, i, j) = v;
        }
  }
  return out;
}

std::vector<double> AuditGrid::rhos() const {
  if (!(rho_min > 0.0) || !(rho_max > rho_min) || rho_max > 1.0 || per_decade < 1) {
    throw Error(Errc::precondition, "audit rho window must satisfy 0 < rho_min < rho_max <= 1");
  }
  const double lo = std::log(rho_min), hi = std::log(rho_max);
  const int count =
      std::max(2, static_cast<int>(std::lround(std::log10(rho_max / rho_min) * per_decade)) + 1);
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / (count - 1));
  }
  out.front() = rho_min;
  out.back() = rho_max;
  return out;
}

std::vector<double> AuditGrid::ys() const {
  if (y_samples < 1) throw Error(Errc::precondition, "audit needs at least one y sample");
  std::vector<double> out(static_cast<std::size_t>(y_samples));
  for (int i = 0; i < y_samples; ++i) {
    out[static_cast<std::size_t>(i)] = 2.0 * std::numbers::pi * i / y_samples;
  }
  return out;
}

std::vector<const ExponentCheck*> CounterexampleAudit::exponent_checks() const {
  return {&curvature_components, &nabla_components, &curvature_norm,   &nabla_norm,
          &christoffel,          &christoffel_bar,  &d_christoffel_bar, &dd_christoffel_bar};
}

bool CounterexampleAudit::passed() const {
  for (const ExponentCheck* c : exponent_checks()) {
    if (!c->pass) return false;
  }
  return hessian_pass && identity_pass && convexity_pass &&
         lipschitz.verdict == LipschitzVerdict::log_blowup;
}

namespace {

ExponentCheck make_check(std::string name, double target, double threshold, const std::vector<double>& rho,
                         const std::vector<double>& sup) {
  ExponentCheck c;
  c.name = std::move(name);
  c.target = target;
  c.threshold = threshold;
  c.rho = rho;
  c.sup = sup;
  const bool positive = std::all_of(sup.begin(), sup.end(), [](double v) { return v > 0.0 && std::isfinite(v); });
  if (positive && rho.size() >= 8) {
    std::vector<double> x(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) x[i] = std::log(rho[i]);
    c.fit = fit_decay_rate(x, sup, Window{x.front(), x.back()});
    c.conclusive = c.fit->r_squared >= 0.9;
    c.pass = c.fit->exponent >= threshold;
  }
  return c;
}

CoordinateMetric values_only(const CoordinateMetric& m) {
  CoordinateMetric v = m;
  v.jet = [j = m.jet](const Vector& x, int) {
    MetricJet out;
    out.g = j(x, 0).g;
    return out;
  };
  return v;
}

}  // namespace

CounterexampleAudit counterexample_audit(const CounterexampleMetric& cm, const AuditGrid& grid) {
  const auto start = std::chrono::steady_clock::now();
  CounterexampleAudit a;
  a.grid = grid;
  const std::vector<double> rhos = grid.rhos();
  const std::vector<double> ys = grid.ys();
  const CompactifiedMetric cmetric = make_counterexample_metric(cm);
  const CoordinateMetric bar = cmetric.full();
  const CoordinateMetric blow = cmetric.blow_up();
  const CoordinateMetric blow_values = values_only(blow);
  const int n = cm.n, dim = n + 1;
  const double eps = std::numeric_limits<double>::epsilon();

  const std::size_t nr = rhos.size();
  std::vector<double> s_rk(nr, 0.0), s_nab(nr, 0.0), s_rk_g(nr, 0.0), s_nab_g(nr, 0.0);
  std::vector<double> s_gam(nr, 0.0), s_gbar(nr, 0.0), s_dgbar(nr, 0.0), s_ddgbar(nr, 0.0);
  a.convexity_ratio.assign(nr, std::numeric_limits<double>::infinity());
  a.identity_pass = true;

  std::vector<std::vector<double>> y_points;
  for (double y : ys) {
    std::vector<double> yv(static_cast<std::size_t>(n), 0.0);
    yv[static_cast<std::size_t>(cm.alpha0 - 1)] = y;
    y_points.push_back(yv);
  }

  for (std::size_t i = 0; i < nr; ++i) {
    const double rho = rhos[i];
    const double h = grid.step * rho;
    a.max_fy_error = std::max(a.max_fy_error,
                              std::abs(counterexample_f(cm, 0.0, rho, 1).f_y - 2.0 * std::log(1.0 / rho)));
    for (const auto& yv : y_points) {
      const Vector x = chart_coords(rho, yv);
      ++a.points;

      const MetricJet jb = bar.evaluate(x, 2, h);
      const MetricJet jg = blow.evaluate(x, 2, h);
      const CovariantCurvatureDerivative ccd = covariant_curvature_derivative(blow, x, h);
      const Tensor4 rk = ccd.r + constant_curvature_tensor(jg.g);
      s_rk[i] = std::max(s_rk[i], rk.max_abs());
      s_nab[i] = std::max(s_nab[i], ccd.nabla_r.max_abs());
      s_rk_g[i] = std::max(s_rk_g[i], gnorm(rk, jg.g));
      s_nab_g[i] = std::max(s_nab_g[i], gnorm(ccd.nabla_r, jg.g));

      // Hessian of rho in gbar: -Gamma-bar^0_ij, since rho is a coordinate.
      const ChristoffelField gb = christoffel(jb, Chart::compactified);
      Matrix hess(dim, dim);
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) hess(p, q) = -gb(0, p, q);
      for (int p = 0; p < dim; ++p)
        for (int q = 0; q < dim; ++q) {
          if (p != q) {
            a.max_hessian_offdiag = std::max(a.max_hessian_offdiag, std::abs(hess(p, q)));
          } else {
            const double want = 0.5 * jb.d1[0](p, p);
            a.max_hessian_diag_defect = std::max(
                a.max_hessian_diag_defect, std::abs(hess(p, p) - want) / std::max(1.0, std::abs(want)));
          }
        }

      // Conformal identity: jet side against differenced metric values.
      const Tensor4 rhs = std::pow(rho, -3.0) * kulkarni_nomizu(hess, jb.g) + std::pow(rho, -2.0) * riemann(jb);
      const Tensor4 lhs_h = riemann(blow_values, x, h) + constant_curvature_tensor(jg.g);
      const Tensor4 lhs_2h = riemann(blow_values, x, 2.0 * h) + constant_curvature_tensor(jg.g);
      // Step-halving difference plus roundoff in g amplified by the nested second difference.
      const double roundoff = 16.0 * eps * max_abs(jg.g) / (h * h);
      const double disc = (lhs_h - lhs_2h).max_abs() + roundoff;
      const double residual = (lhs_h - rhs).max_abs();
      a.max_identity_residual = std::max(a.max_identity_residual, residual);
      const double ratio = residual / (10.0 * disc);
      a.max_identity_ratio = std::max(a.max_identity_ratio, ratio);
      if (!(ratio <= 1.0)) a.identity_pass = false;

      // Hess_g r on the level set: r = -log rho, so r_ab = Gamma^0_ab / rho there.
      const ChristoffelField gg = christoffel(jg, Chart::compactified);
      Matrix hr(n, n);
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) hr(p, q) = gg(0, p + 1, q + 1) / rho;
      const Matrix level = jb.g.bottomRightCorner(n, n) / (rho * rho);
      a.convexity_ratio[i] = std::min(a.convexity_ratio[i], generalized_eigen_range(hr, level).min);

      s_gam[i] = std::max(s_gam[i], gg.gamma.max_abs());
      s_gbar[i] = std::max(s_gbar[i], gb.gamma.max_abs());
      s_dgbar[i] = std::max(s_dgbar[i], christoffel_derivative(jb).max_abs());
      const auto dgamma_at = [&](const Vector& xs) { return christoffel_derivative(bar.evaluate(xs, 2, h)); };
      for (int m = 0; m < dim; ++m) {
        const DenseTensor<4> dd = m == 0 ? fd::partial(dgamma_at, x, m, h, 0.0, 1.0) : fd::partial(dgamma_at, x, m, h);
        s_ddgbar[i] = std::max(s_ddgbar[i], dd.max_abs());
      }
    }
  }

  a.curvature_components = make_check("|R + K| components", -3.0, -3.1, rhos, s_rk);
  a.nabla_components = make_check("|nabla R| components", -4.0, -4.1, rhos, s_nab);
  a.curvature_norm = make_check("|R + K|_g", 1.0, 0.8, rhos, s_rk_g);
  a.nabla_norm = make_check("|nabla R|_g", 1.0, 0.7, rhos, s_nab_g);
  a.christoffel = make_check("Gamma", -1.0, -1.1, rhos, s_gam);
  std::vector<double> gbar_over_log(nr);
  for (std::size_t i = 0; i < nr; ++i) gbar_over_log[i] = s_gbar[i] / std::log(1.0 / rhos[i]);
  a.christoffel_bar = make_check("Gamma-bar / log(1/rho)", 0.0, -0.1, rhos, gbar_over_log);
  a.d_christoffel_bar = make_check("d Gamma-bar", -1.0, -1.1, rhos, s_dgbar);
  a.dd_christoffel_bar = make_check("d^2 Gamma-bar", -2.0, -2.1, rhos, s_ddgbar);

  a.hessian_pass = a.max_hessian_offdiag <= 1e-12 && a.max_hessian_diag_defect <= 1e-12;

  for (std::size_t i = 0; i < nr; ++i) {
    if (a.convexity_ratio[i] > 0.5) {
      a.rho0 = rhos[i];
    } else {
      break;
    }
  }
  a.convexity_pass = a.rho0.has_value();

  a.lipschitz = lipschitz_verdict(gbar_derivative_grid(cmetric, y_points, rhos));
  a.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return a;
}

}  // namespace ahlab
