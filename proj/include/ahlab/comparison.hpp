#pragma once

#include "ahlab/decay_fit.hpp"
#include "ahlab/ode.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace ahlab {

// ---------------------------------------------------------------------------
// Model system
//   u' = c e^{-r} u + c e^{r} v + c e^{(2 + Omega) r}
//   v' = c e^{-2r} u + c e^{-r} v

struct ModelSystemParams {
  double c = 1.0;
  double Omega = -0.5;
  double u0 = 1.0;
  double v0 = 1.0;
  double r0 = 0.0;

  /// Omega < 0; larger values are allowed but labelled out of regime.
  bool paper_regime() const { return Omega < 0.0; }
};

/// c >= 0 (c = 0 only as a degenerate test case), u0 > 0, v0 > 0.
void validate(const ModelSystemParams& p);

struct ModelRunOptions {
  double tol = 1e-9;
  std::size_t samples = 512;
  /// Integration halts with a "cap" event once |u| exceeds this.
  double cap = 1e12;
  /// Multiplies the forcing term c e^{(2 + Omega) r}.
  double forcing_scale = 1.0;
};

struct ModelTrajectory {
  std::vector<double> r, u, v;
  std::optional<ode::Event> halted;
  /// Growth fits of u and v over the last 60% of the samples (absent when
  /// the quantity is not positive there, e.g. identically zero).
  std::optional<DecayFit> u_fit, v_fit;
  double v_sup = 0.0;
  bool paper_regime = true;
};

ModelTrajectory solve_model_system(const ModelSystemParams& p, double r1,
                                   const ModelRunOptions& opts = {});

// ---------------------------------------------------------------------------
// Second-order reductions  y'' + p(r) y' + q(r) y = F(r).

enum class Unknown { for_v, for_u };

struct SecondOrderODE {
  Unknown which = Unknown::for_v;
  std::function<double(double)> p, q, forcing;
  /// Growth exponent of the forcing (Omega for v, 2 + Omega for u).
  double forcing_exponent = 0.0;
  std::string provenance;
};

struct Reduction {
  SecondOrderODE for_v;
  SecondOrderODE for_u;
  /// u = e^{2r} v' / c - e^r v
  std::function<double(double r, double v, double dv)> u_from_v;
  /// v = e^{-r} u' / c - e^{-2r} u - e^{(1 + Omega) r}
  std::function<double(double r, double u, double du)> v_from_u;
};

/// Throws Errc::reduction_undefined for c = 0.
Reduction reduce_to_second_order(const ModelSystemParams& p);

/// Integrates y'' + p y' + q y = F (F dropped when `homogeneous`) from (y0, dy0).
struct SecondOrderTrajectory {
  std::vector<double> r, y, dy;
};
SecondOrderTrajectory integrate_second_order(const SecondOrderODE& ode, double r0, double r1,
                                             double y0, double dy0, bool homogeneous,
                                             double tol = 1e-10, std::size_t samples = 512);

struct RoundTripReport {
  /// Largest residual of each second-order equation along the model trajectory,
  /// relative to the largest term in it.
  double v_residual = 0.0;
  double u_residual = 0.0;
  /// Largest relative pointwise gap between the model solution and the
  /// solution of each second-order equation (plus reconstruction of the partner).
  double v_gap = 0.0;
  double u_gap = 0.0;
};

RoundTripReport model_round_trip(const ModelSystemParams& p, double r1, double tol = 1e-10,
                                 std::size_t samples = 512);

// ---------------------------------------------------------------------------
// Homogeneous asymptotics and variation of parameters.

struct HomogeneousBasis {
  std::vector<double> r;
  /// Forward solution with no zero on the span (largest growth among a few
  /// initial conditions) and its derivative.
  std::vector<double> dominant, d_dominant;
  /// dominant * int_r^inf W / dominant^2, from the Wronskian W' = -p W.
  std::vector<double> recessive, d_recessive;
  /// Wronskian recessive * dominant' - dominant * recessive'.
  std::vector<double> wronskian;
  /// Column-normalized condition estimate of the fundamental matrix.
  std::vector<double> condition;
};

HomogeneousBasis homogeneous_basis(const SecondOrderODE& ode, double r0, double r1,
                                   double tol = 1e-10, std::size_t samples = 2048);

struct ExponentReport {
  DecayFit dominant;
  DecayFit recessive;
  /// {recessive, dominant}: {-2, 0} for v, {0, 1} for u.
  double expected_recessive = 0.0;
  double expected_dominant = 0.0;
  bool conclusive = false;

  bool matches(double tol) const;
};

ExponentReport homogeneous_asymptotics(const SecondOrderODE& ode, double r0, double r1,
                                       double tol = 1e-10);

struct ParticularSolution {
  std::vector<double> r, y, dy;
  /// Empty when the particular solution vanishes identically.
  std::optional<DecayFit> y_fit;
  /// Fit of |det phi| for the fundamental matrix normalized to the basis above.
  DecayFit det_fit;
  double expected_exponent = 0.0;
  double max_condition = 0.0;
};

/// Particular solution by variation of parameters over the recessive/dominant
/// basis. The coefficient of each basis solution is integrated from r0 when its
/// integrand grows and from infinity when it decays, which keeps the result
/// free of homogeneous components. Throws Errc::ill_conditioned when the
/// fundamental matrix condition estimate exceeds `max_condition`.
ParticularSolution variation_of_parameters(const SecondOrderODE& ode, double r0, double r1,
                                           double tol = 1e-10, double max_condition = 1e10);

// ---------------------------------------------------------------------------

struct PositivityVerdict {
  bool positive = true;
  std::optional<double> first_crossing;
  std::optional<ode::Event> halted;
  double min_u = 0.0;
  double min_v = 0.0;
};

PositivityVerdict positivity_persistence(const ModelSystemParams& p, double r1,
                                         const ModelRunOptions& opts = {});

// ---------------------------------------------------------------------------
// Comparison theorem for
//   x' <= a x + b y + e,  y' <= c x + d y + f
//   u' =  a u + b v + e,  v' =  c u + d v + f.

using Coefficient = std::function<double(double)>;

struct ComparisonProblem {
  Coefficient a, b, c, d, e, f;
  /// The inequality pair, as closures (trajectories can be wrapped with interpolant()).
  std::function<double(double)> x, y;
  double u0 = 1.0;
  double v0 = 1.0;
  double t0 = 0.0;
  double t1 = 1.0;
};

struct ComparisonVerdict {
  bool holds = true;
  double max_x_minus_u = 0.0;
  double max_y_minus_v = 0.0;
  std::optional<double> first_violation;
  std::vector<double> t, u, v;
};

/// Errc::hypothesis_violation if a, b, c, d are not positive (or e, f negative)
/// at some sample; Errc::precondition unless x(t0) < u0 and y(t0) < v0.
ComparisonVerdict ode_compare(const ComparisonProblem& prob, double tol = 1e-9,
                              std::size_t samples = 512);

/// Piecewise-linear interpolant through (t, values), clamped at the ends.
std::function<double(double)> interpolant(std::vector<double> t, std::vector<double> values);

struct FuzzRecord {
  std::size_t index = 0;
  std::vector<double> coefficients;  // a, b, c, d, e, f as (k0, k1, k2) triples
  double shrink_x = 1.0;
  double shrink_y = 1.0;
  double x0 = 0.0, y0 = 0.0, u0 = 0.0, v0 = 0.0;
  double t1 = 0.0;
  bool holds = true;
  double max_x_minus_u = 0.0;
  double max_y_minus_v = 0.0;
};

struct FuzzSummary {
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t violations = 0;
  double slack = 0.0;
  std::vector<FuzzRecord> records;
};

/// Random problems with coefficients k0 + k1 e^{-t} + k2 e^{-2t} (k0 > 0,
/// k1, k2 >= 0), x and y solving the system with right-hand sides shrunk by
/// random factors in (0, 1), and strict initial gaps.
FuzzSummary fuzz_ode_compare(std::uint64_t seed, std::size_t instances, double slack = 1e-9);

}  // namespace ahlab
