#include "ahlab/acceptance.hpp"

#include "ahlab/comparison.hpp"
#include "ahlab/compactification.hpp"
#include "ahlab/curvature.hpp"
#include "ahlab/decay_fit.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/gallery.hpp"
#include "ahlab/riccati.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <exception>
#include <limits>
#include <numbers>
#include <random>

namespace ahlab {

namespace {

std::string fmt(const char* f, ...) {
  va_list args;
  va_start(args, f);
  char buf[1024];
  std::vsnprintf(buf, sizeof buf, f, args);
  va_end(args);
  return buf;
}

double fit_exponent(const std::optional<DecayFit>& f) {
  return f ? f->exponent : std::numeric_limits<double>::quiet_NaN();
}

ModelSystemParams model(double c, double omega) {
  ModelSystemParams p;
  p.c = c;
  p.Omega = omega;
  return p;
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

void hyperbolic_exactness(CriterionResult& res) {
  const int n = 2;
  const Matrix ring = round_sphere_metric({0.9, 0.2});
  const double s1 = std::sinh(1.0);
  const RiccatiForcing unit = [n](double) { return Matrix(Matrix::Identity(n, n)); };
  const auto start = std::chrono::steady_clock::now();
  const ShapeMetricTrajectory traj =
      integrate_shape_metric(unit, (1.0 / std::tanh(1.0)) * Matrix::Identity(n, n), s1 * s1 * ring, 0.0, 20.0);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  double err = 0.0;
  for (const auto& s : traj.samples) {
    const double coth = 1.0 / std::tanh(1.0 + s.r);
    const Matrix g = std::pow(std::sinh(1.0 + s.r), 2) * ring;
    err = std::max(err, max_abs(s.S - coth * Matrix::Identity(n, n)) / coth);
    err = std::max(err, max_abs(s.g - g) / max_abs(g));
  }
  res.pass = err <= 1e-6 && secs < 1.0;
  res.details = fmt("max relative error %.3g on [0, 20], integration %.3f s", err, secs);
}

void riccati_decay(CriterionResult& res) {
  ScalarRiccatiProblem p;
  p.f = [](double r) { return 1.0 + std::exp(-r) * std::cos(3.0 * r); };
  p.envelope_constant = 1.0;
  p.lambda0 = 3.0;
  validate(p);
  const EnvelopeReport rep = lemma_decay_envelope_check(integrate_scalar_riccati(p, 1e-12), 1.0, 3.0);
  const double e = fit_exponent(rep.fit);
  res.pass = rep.upper_holds && rep.lower_holds && rep.fit && e <= -1.0 + 0.05;
  res.details = fmt("upper %s (K = %g), lower %s (K = %g), |lambda - 1| exponent %.4f", rep.upper_holds ? "holds" : "violated",
                    rep.k_upper, rep.lower_holds ? "holds" : "violated", rep.k_lower, e);
}

void decay_fitting(CriterionResult& res) {
  std::vector<double> x, q;
  for (int i = 0; i <= 200; ++i) {
    x.push_back(5.0 + 10.0 * i / 200.0);
    q.push_back(1.0 / std::tanh(x.back()) - 1.0);
  }
  const DecayFit f = fit_decay_rate(x, q, Window{5.0, 15.0});
  res.pass = std::abs(f.exponent + 2.0) <= 0.02 && f.r_squared >= 0.9999;
  res.details = fmt("coth(r) - 1 on [5, 15]: exponent %.6f, r^2 %.8f", f.exponent, f.r_squared);
}

void model_system(CriterionResult& res) {
  const ModelSystemParams p = model(1.0, -0.5);
  ModelRunOptions opts;
  opts.cap = 1e30;
  const ModelTrajectory t = solve_model_system(p, 30.0, opts);
  const RoundTripReport rt = model_round_trip(p, 20.0, 1e-12);
  const ParticularSolution ps = variation_of_parameters(reduce_to_second_order(p).for_v, 0.0, 30.0);
  const double eu = fit_exponent(t.u_fit), ev = fit_exponent(t.v_fit), ey = fit_exponent(ps.y_fit);
  const double round_trip = std::max({rt.v_residual, rt.u_residual, rt.v_gap, rt.u_gap});
  res.pass = !t.halted && std::abs(eu - 1.5) <= 0.05 && std::isfinite(t.v_sup) && ev <= 0.02 && round_trip <= 1e-6 &&
             std::abs(ps.det_fit.exponent + 2.0) <= 0.05 && std::abs(ey + 0.5) <= 0.1;
  res.details = fmt("u exponent %.4f, sup v %.4g (exponent %.4f), round trip %.2g, det exponent %.4f, v_IH exponent %.4f",
                    eu, t.v_sup, ev, round_trip, ps.det_fit.exponent, ey);
}

void homogeneous(CriterionResult& res) {
  res.pass = true;
  for (double c : {0.5, 1.0, 2.0}) {
    const Reduction red = reduce_to_second_order(model(c, -0.5));
    const ExponentReport v = homogeneous_asymptotics(red.for_v, 2.0, 25.0);
    const ExponentReport u = homogeneous_asymptotics(red.for_u, 2.0, 25.0);
    const bool ok = v.conclusive && u.conclusive && v.matches(0.05) && u.matches(0.05);
    res.pass = res.pass && ok;
    res.details += fmt("%sc = %g: v {%.3f, %.3f}, u {%.3f, %.3f}", res.details.empty() ? "" : "; ", c,
                       v.recessive.exponent, v.dominant.exponent, u.recessive.exponent, u.dominant.exponent);
  }
}

void fuzzing(CriterionResult& res) {
  const auto start = std::chrono::steady_clock::now();
  const FuzzSummary s = fuzz_ode_compare(20240601, 200, 1e-9);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  res.pass = s.violations == 0 && s.instances == 200 && secs < 30.0;
  res.details = fmt("seed %llu, %zu instances, %zu violations, %.2f s", static_cast<unsigned long long>(s.seed),
                    s.instances, s.violations, secs);
}

void tangential(CriterionResult& res) {
  const double omega = 1.5, y1 = 0.3;
  const Profile psi = Profile::sine();
  const TangentialTrajectory t =
      integrate_tangential_system(make_perturbed_ah(2, psi, omega), {y1, 0.0}, 0.0, 15.0);
  double scale = 0.0, err = 0.0;
  for (const auto& s : t.samples) {
    const double expect = perturbed_gbar_dy(psi, omega, y1, std::exp(-s.r));
    scale = std::max(scale, std::abs(expect));
    for (Eigen::Index k = 0; k < s.dgbar.size(); ++k) {
      // Only d_1 gbar_11 and d_1 gbar_22 are nonzero in the oracle.
      const double want = (k == 0 || k == 3) ? expect : 0.0;
      err = std::max(err, std::abs(s.dgbar(k) - want));
    }
  }
  const LipschitzReport lip = lipschitz_verdict(t);
  const CoefBoundsReport coef = coefficient_bounds(t, 1.0 - omega);
  res.pass = err / scale <= 0.01 && lip.verdict == LipschitzVerdict::lipschitz && coef.all_pass();
  res.details = fmt("oracle error %.3g (relative sup), verdict %s, coefficient fits", err / scale,
                    to_string(lip.verdict).c_str());
  for (const auto& f : coef.fits) {
    res.details += fmt(" %s %s", f.name.c_str(),
                       f.vanishes ? "vanishes" : fmt("%.3f/%g", fit_exponent(f.fit), f.target).c_str());
  }
}

void counterexample(CriterionResult& res) {
  const CounterexampleAudit a = counterexample_audit(CounterexampleMetric{});
  const double e_rk = fit_exponent(a.curvature_norm.fit), e_nab = fit_exponent(a.nabla_norm.fit);
  const bool ok_a = a.max_fy_error <= 1e-8;
  const bool ok_b = a.lipschitz.verdict == LipschitzVerdict::log_blowup && a.lipschitz.r_squared >= 0.99;
  const bool ok_c = e_rk >= 0.8 && e_nab >= 0.7;
  const bool ok_d = a.max_hessian_offdiag <= 1e-10;
  const bool ok_e = a.identity_pass;
  res.pass = ok_a && ok_b && ok_c && ok_d && ok_e && a.seconds < 120.0;
  res.details = fmt("%zu points in %.1f s; d_y f error %.2g; %s slope %.3f r^2 %.5f; |R + K|_g exponent %.3f, "
                    "|nabla R|_g exponent %.3f; Hessian off-diagonal %.2g; identity residual/(10 x error) %.3g",
                    a.points, a.seconds, a.max_fy_error, to_string(a.lipschitz.verdict).c_str(), a.lipschitz.slope,
                    a.lipschitz.r_squared, e_rk, e_nab, a.max_hessian_offdiag, a.max_identity_ratio);
}

void tensor_identities(CriterionResult& res) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double kn = 0.0;
  for (int k = 0; k < 20; ++k) {
    const int n = 2 + k % 3;
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = u(rng);
    const Matrix g = a * a.transpose() + 0.5 * Matrix::Identity(n, n);
    const double scale = max_abs(g) * max_abs(g);
    kn = std::max(kn, (kulkarni_nomizu(g, g) - 2.0 * constant_curvature_tensor(g)).max_abs() / scale);
  }

  struct Case {
    CoordinateMetric metric;
    std::vector<double> x;
  };
  const FermiMetric round = make_hyperbolic(2, HyperbolicFiber::round_sample);
  const FermiMetric pert = make_perturbed_ah(2, Profile::sine(), 1.5);
  const CompactifiedMetric cex = make_counterexample_metric(CounterexampleMetric{});
  const std::vector<Case> cases{{round.full(), {1.4, 0.7, 0.2}},
                                {values_only(round.full()), {1.4, 0.7, 0.2}},
                                {make_hyperbolic(3, HyperbolicFiber::flat_torus).full(), {0.9, 0.0, 0.5, 1.0}},
                                {pert.full(), {2.0, 0.3, 0.0}},
                                {values_only(pert.full()), {2.0, 0.3, 0.0}},
                                {cex.blow_up(), {0.05, 0.03, 0.4}},
                                {cex.full(), {0.2, 0.1, 0.4}}};
  const double eps = std::numeric_limits<double>::epsilon();
  const double h = 1e-3;
  double worst_ratio = 0.0;
  for (const Case& c : cases) {
    const Vector x = chart_coords(c.x[0], std::vector<double>(c.x.begin() + 1, c.x.end()));
    const MetricJet j = c.metric.evaluate(x, 2, h);
    const Tensor4 r = riemann(j);
    double mag = max_abs(j.g);
    for (const auto& d : j.d2) mag = std::max(mag, max_abs(d));
    // Truncation plus rounding scale of nested 4th-order differences.
    const double disc = (std::pow(h, 4) + eps / (h * h)) * mag * std::max(1.0, r.max_abs());
    worst_ratio = std::max(worst_ratio, std::max(riemann_symmetry_defect(r), bianchi_defect(r)) / (10.0 * disc));
  }

  Matrix a(3, 3);
  a << 1.0, 0.1, -0.05, 0.02, 0.9, 0.1, -0.1, 0.05, 1.1;
  Vector b(3);
  b << 0.1, -0.05, 0.2;
  const ChartMap affine{[a, b](const Vector& x) { return Vector(a * x + b); }, [a](const Vector&) { return a; },
                        [](const Vector&) { return std::vector<Matrix>(3, Matrix::Zero(3, 3)); }};
  double law = 0.0;
  law = std::max(law, christoffel_transform_residual(round, affine, ChartPoint::fermi({0.8, 0.3}, 1.5)));
  law = std::max(law, christoffel_transform_residual(pert, affine, ChartPoint::fermi({0.8, 0.3}, 1.5)));
  law = std::max(law, christoffel_transform_residual(make_hyperbolic(2, HyperbolicFiber::flat_torus), affine,
                                                     ChartPoint::fermi({0.8, 0.3}, 1.5)));
  res.pass = kn <= 1e-13 && worst_ratio <= 1.0 && law <= 1e-6;
  res.details = fmt("|g (x) g - 2K| %.2g on 20 SPD matrices; symmetry/Bianchi defect at %.3g of 10x discretization "
                    "error over %zu gallery metrics; transformation-law residual %.3g",
                    kn, worst_ratio, cases.size(), law);
}

void reconstruction(CriterionResult& res) {
  const FermiMetric m = make_perturbed_ah(2, Profile::sine(), 1.5);
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> uy(0.0, 2.0 * std::numbers::pi), ur(0.5, 8.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const double y1 = uy(rng), y2 = uy(rng), r = ur(rng);
    worst = std::max(worst, covariant_curvature_derivative(m, ChartPoint::fermi({y1, y2}, r), 1e-3).residual);
  }
  res.pass = worst <= 1e-4;
  res.details = fmt("max residual %.3g over 50 points, r in [0.5, 8]", worst);
}

struct Entry {
  const char* name;
  void (*run)(CriterionResult&);
};

constexpr Entry kEntries[kAcceptanceCriteria] = {
    {"hyperbolic exactness", hyperbolic_exactness},
    {"Riccati decay envelopes", riccati_decay},
    {"decay fitting", decay_fitting},
    {"model system", model_system},
    {"homogeneous asymptotics", homogeneous},
    {"comparison fuzzing", fuzzing},
    {"tangential system vs oracle", tangential},
    {"counterexample audit", counterexample},
    {"tensor identities", tensor_identities},
    {"coordinate vs covariant residual", reconstruction},
};

}  // namespace

CriterionResult run_criterion(int id) {
  if (id < 1 || id > kAcceptanceCriteria) throw Error(Errc::precondition, "acceptance criterion id out of range");
  const Entry& e = kEntries[id - 1];
  CriterionResult res;
  res.id = id;
  res.name = e.name;
  const auto start = std::chrono::steady_clock::now();
  try {
    e.run(res);
  } catch (const std::exception& ex) {
    res.pass = false;
    res.details = std::string("error: ") + ex.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

std::vector<CriterionResult> run_acceptance() {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kAcceptanceCriteria; ++id) out.push_back(run_criterion(id));
  return out;
}

std::string format_line(const CriterionResult& r) {
  return fmt("[%s] %d %s (%.2f s): ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds) + r.details;
}

}  // namespace ahlab
