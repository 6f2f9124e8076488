#pragma once

#include "ahlab/compactification.hpp"
#include "ahlab/decay_fit.hpp"
#include "ahlab/linalg.hpp"
#include "ahlab/metric.hpp"
#include "ahlab/tensor.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace ahlab {

enum class HyperbolicFiber {
  round_sample,  // dr^2 + sinh^2(r) g_round, hyperspherical angles on the fiber
  flat_torus,    // dr^2 + e^{2r} delta
};

/// Hyperbolic space in Fermi coordinates about a point (round) or a horosphere (flat).
FermiMetric make_hyperbolic(int n, HyperbolicFiber fiber);

/// Round metric of S^n in hyperspherical angles y = (theta_1, ..., theta_n):
/// diag(1, sin^2 theta_1, sin^2 theta_1 sin^2 theta_2, ...).
Matrix round_sphere_metric(const std::vector<double>& y);

/// A smooth function of one variable with its first two derivatives.
struct Profile {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> ddf;

  static Profile sine();
  static Profile zero();
};

/// g_{ab}(y, r) = e^{2r} exp(2 psi(y^1) e^{-omega r}) delta_{ab}, so that
/// gbar_{ab} = exp(2 psi(y^1) rho^omega) delta_{ab}.
FermiMetric make_perturbed_ah(int n, Profile psi, double omega);

/// Closed-form tangential derivative d_{y^1} gbar_{aa} of the perturbed family.
double perturbed_gbar_dy(const Profile& psi, double omega, double y1, double rho);
/// Closed-form shape operator eigenvalue 1 - omega psi e^{-omega r} of the perturbed family.
double perturbed_shape(const Profile& psi, double omega, double y1, double r);

/// Odd C^3 cutoff: eta(x) = x on [-1/2, 1/2], eta = sign(x) for |x| >= 1, and a
/// degree-7 polynomial on 1/2 <= |x| <= 1 matching value and three derivatives.
class Mollifier {
 public:
  Mollifier();

  double operator()(double x) const { return value(x); }
  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  double d3(double x) const;

  /// sup |eta'|, sup |eta''|, sup |eta'''|, from dense sampling of the profile.
  double c1() const { return c1_; }
  double c2() const { return c2_; }
  double c3() const { return c3_; }

 private:
  double c1_ = 0.0, c2_ = 0.0, c3_ = 0.0;
};

struct CounterexampleJet {
  double f = 0.0;
  double f_rho = 0.0;
  double f_y = 0.0;
  double f_rho_rho = 0.0;
  double f_y_rho = 0.0;
  double f_y_y = 0.0;
};

struct CounterexampleMetric {
  Mollifier eta;
  double quad_tol = 1e-10;
  int n = 2;
  /// Tangential index (1-based) of the coordinate that f depends on.
  int alpha0 = 1;
};

/// f(y, rho) = 2 int_rho^1 eta(sin y / s) ds and its derivatives up to order 2.
/// Integrals are evaluated in t = log s, split where |sin y| / s = 1/2 and 1.
/// `order` = 0 computes f only, 1 adds first derivatives, 2 everything.
CounterexampleJet counterexample_f(const CounterexampleMetric& cm, double y, double rho,
                                   int order = 2);

/// gbar = drho^2 + e^{f(y, rho)} delta with a closed-form/quadrature jet.
CompactifiedMetric make_counterexample_metric(const CounterexampleMetric& cm);

/// d_m Gamma^k_ij stored as (m, k, i, j), from a jet of order 2.
DenseTensor<4> christoffel_derivative(const MetricJet& jet);

/// Audit sampling: rho log-spaced on [rho_min, rho_max] with `per_decade`
/// points per decade (both ends included), y^{alpha0} uniform on [0, 2 pi)
/// with `y_samples` points; the other tangential coordinates are 0.
struct AuditGrid {
  double rho_min = 1e-3;
  double rho_max = 1e-1;
  int per_decade = 24;
  int y_samples = 64;
  /// Relative differencing step: h = step * rho.
  double step = 1e-3;

  std::vector<double> rhos() const;
  std::vector<double> ys() const;
};

/// sup over y of a quantity at each audited rho, with its power law
/// q ~ C rho^p fitted over the whole rho window.
struct ExponentCheck {
  std::string name;
  double target = 0.0;     // expected exponent
  double threshold = 0.0;  // pass iff the fitted exponent is >= threshold
  std::vector<double> rho;
  std::vector<double> sup;
  std::optional<DecayFit> fit;  // absent when sup is not positive throughout
  bool conclusive = false;      // r^2 >= 0.9
  bool pass = false;
};

struct CounterexampleAudit {
  AuditGrid grid;
  std::size_t points = 0;

  /// max over audited rho of |d_y f(0, rho) - 2 log(1/rho)|.
  double max_fy_error = 0.0;

  // Coordinate components of the blow-up g = rho^{-2} gbar.
  ExponentCheck curvature_components;  // max |(R + K)_ijkl|, target -3
  ExponentCheck nabla_components;      // max |nabla_m R_ijkl|, target -4

  // Intrinsic norms.
  ExponentCheck curvature_norm;  // |R + K|_g
  ExponentCheck nabla_norm;      // |nabla R|_g

  /// Hessian of rho in gbar: off-diagonal entries and the deviation of the
  /// tangential diagonal from d_rho gbar_ii / 2 (relative).
  double max_hessian_offdiag = 0.0;
  double max_hessian_diag_defect = 0.0;
  bool hessian_pass = false;

  /// R + K = rho^{-3} (Hess rho (x) gbar) + rho^{-2} Rbar, with R + K from
  /// differenced metric values and the right side from the quadrature jet.
  /// ratio = residual / (10 * discretization error estimate); pass iff <= 1 everywhere.
  double max_identity_residual = 0.0;
  double max_identity_ratio = 0.0;
  bool identity_pass = false;

  /// Smallest eigenvalue of Hess_g r on the level set relative to
  /// rho^{-2} gbar, min over y at each rho.
  std::vector<double> convexity_ratio;
  /// Largest audited rho below which every ratio exceeds 1/2.
  std::optional<double> rho0;
  bool convexity_pass = false;

  // Christoffel symbols of g and gbar.
  ExponentCheck christoffel;        // Gamma, target -1
  ExponentCheck christoffel_bar;    // Gamma-bar / log(1/rho), target 0
  ExponentCheck d_christoffel_bar;  // d Gamma-bar, target -1
  ExponentCheck dd_christoffel_bar; // d^2 Gamma-bar, target -2

  /// Lipschitz verdict on gbar over the audit grid.
  LipschitzReport lipschitz;

  double seconds = 0.0;

  std::vector<const ExponentCheck*> exponent_checks() const;
  bool passed() const;
};

/// Curvature, Hessian and Christoffel audit of the counterexample on `grid`.
/// Thresholds: component exponents >= -3.1 and -4.1, norm exponents >= 0.8
/// (|R + K|_g) and >= 0.7 (|nabla R|_g), Christoffel exponents within 0.1 of target.
CounterexampleAudit counterexample_audit(const CounterexampleMetric& cm, const AuditGrid& grid = {});

}  // namespace ahlab
