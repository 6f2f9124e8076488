#include "ahlab/curvature.hpp"
#include "ahlab/decay_fit.hpp"
#include "ahlab/errors.hpp"
#include "ahlab/gallery.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace ahlab;

namespace {

constexpr double kPi = std::numbers::pi;

// sup_y |R + K|_g along r for a perturbed metric, fitted against r.
double perturbed_norm_exponent(double omega) {
  const FermiMetric m = make_perturbed_ah(2, Profile::sine(), omega);
  const CoordinateMetric full = m.full();
  std::vector<double> rs, q;
  for (double r = 0.0; r <= 15.0 + 1e-12; r += 0.25) {
    double sup = 0.0;
    for (double y1 : {0.3, 0.9, 1.5, 2.4, 4.0, 5.3}) {
      const Vector x = chart_coords(r, {y1, 0.7});
      const MetricJet j = full.evaluate(x, 2, 1e-3);
      sup = std::max(sup, gnorm(riemann(j) + constant_curvature_tensor(j.g), j.g));
    }
    rs.push_back(r);
    q.push_back(sup);
  }
  return -fit_decay_rate(rs, q).exponent;
}

AuditGrid coarse_grid() {
  AuditGrid g;
  g.per_decade = 6;
  g.y_samples = 16;
  return g;
}

}  // namespace

TEST(Mollifier, ShapeOnDenseSamples) {
  const Mollifier eta;
  for (int i = 0; i <= 10000; ++i) {
    const double x = -3.0 + 6.0 * i / 10000.0;
    EXPECT_NEAR(eta(x), -eta(-x), 1e-15) << x;
    EXPECT_LE(std::abs(eta(x)), 1.0 + 1e-15) << x;
    EXPECT_GE(eta.d1(x), -1e-14) << x;
    if (std::abs(x) <= 0.5) EXPECT_DOUBLE_EQ(eta(x), x);
    if (std::abs(x) >= 1.0) EXPECT_DOUBLE_EQ(eta(x), x > 0 ? 1.0 : -1.0);
  }
}

TEST(Mollifier, DerivativesMatchDifferencesAndJoinContinuously) {
  const Mollifier eta;
  const double h = 1e-5;
  for (double x : {0.55, 0.62, 0.75, 0.81, 0.93, -0.7}) {
    EXPECT_NEAR(eta.d1(x), (eta(x + h) - eta(x - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(eta.d2(x), (eta.d1(x + h) - eta.d1(x - h)) / (2 * h), 1e-7);
    EXPECT_NEAR(eta.d3(x), (eta.d2(x + h) - eta.d2(x - h)) / (2 * h), 1e-6);
  }
  const double e = 1e-9;
  for (double k : {0.5, 1.0}) {
    EXPECT_NEAR(eta(k - e), eta(k + e), 1e-8);
    EXPECT_NEAR(eta.d1(k - e), eta.d1(k + e), 1e-7);
    EXPECT_NEAR(eta.d2(k - e), eta.d2(k + e), 1e-6);
    EXPECT_NEAR(eta.d3(k - e), eta.d3(k + e), 1e-5);
  }
  EXPECT_GE(eta.c1(), 1.0);
  EXPECT_GT(eta.c2(), 0.0);
  EXPECT_GT(eta.c3(), 0.0);
}

TEST(CounterexampleF, ValueAtQuarterTurn) {
  const CounterexampleMetric cm;
  for (double rho : {1e-3, 0.01, 0.2, 0.7, 1.0}) {
    EXPECT_NEAR(counterexample_f(cm, kPi / 2, rho).f, 2.0 * (1.0 - rho), 1e-9) << rho;
  }
}

TEST(CounterexampleF, TangentialDerivativeOnAxis) {
  const CounterexampleMetric cm;
  for (double rho : {1e-3, 3e-3, 0.01, 0.05, 0.1, 0.5}) {
    const CounterexampleJet j = counterexample_f(cm, 0.0, rho);
    EXPECT_NEAR(j.f_y, 2.0 * std::log(1.0 / rho), 1e-8) << rho;
    EXPECT_EQ(j.f_rho, 0.0);
    EXPECT_EQ(j.f, 0.0);
  }
}

TEST(CounterexampleF, JetMatchesDifferencesAtRandomPoints) {
  const CounterexampleMetric cm;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uy(0.0, 2 * kPi), ur(std::log(2e-3), std::log(0.9));
  const auto f = [&](double y, double rho) { return counterexample_f(cm, y, rho, 0).f; };
  for (int i = 0; i < 100; ++i) {
    const double y = uy(rng), rho = std::exp(ur(rng));
    const CounterexampleJet j = counterexample_f(cm, y, rho);
    const double h = 1e-3 * rho, k = 1e-4;
    const double fr = (f(y, rho - 2 * h) - f(y, rho + 2 * h) + 8 * (f(y, rho + h) - f(y, rho - h))) / (12 * h);
    const double fy = (f(y - 2 * k, rho) - f(y + 2 * k, rho) + 8 * (f(y + k, rho) - f(y - k, rho))) / (12 * k);
    EXPECT_NEAR(j.f_rho, fr, 1e-5 * (1.0 + std::abs(j.f_rho))) << y << " " << rho;
    EXPECT_NEAR(j.f_y, fy, 1e-5 * (1.0 + std::abs(j.f_y))) << y << " " << rho;
    // Second derivatives from differences of the analytic first derivatives.
    const auto jy = [&](double yy) { return counterexample_f(cm, yy, rho, 1); };
    const double fyy = (jy(y + k).f_y - jy(y - k).f_y) / (2 * k);
    const double fyr = (jy(y + k).f_rho - jy(y - k).f_rho) / (2 * k);
    const double frr = (counterexample_f(cm, y, rho + h, 1).f_rho - counterexample_f(cm, y, rho - h, 1).f_rho) / (2 * h);
    EXPECT_NEAR(j.f_y_y, fyy, 1e-4 * (1.0 + std::abs(j.f_y_y))) << y << " " << rho;
    EXPECT_NEAR(j.f_y_rho, fyr, 1e-4 * (1.0 + std::abs(j.f_y_rho))) << y << " " << rho;
    EXPECT_NEAR(j.f_rho_rho, frr, 1e-4 * (1.0 + std::abs(j.f_rho_rho))) << y << " " << rho;
  }
}

TEST(CounterexampleF, RejectsRhoOutsideUnitInterval) {
  const CounterexampleMetric cm;
  EXPECT_THROW(counterexample_f(cm, 0.3, 0.0), Error);
  EXPECT_THROW(counterexample_f(cm, 0.3, 1.5), Error);
}

TEST(CounterexampleMetric, SecondDerivativesAreOrderInverseRho) {
  const CounterexampleMetric cm;
  const CoordinateMetric bar = make_counterexample_metric(cm).full();
  const AuditGrid grid = coarse_grid();
  std::vector<double> rho, sup;
  for (double r : grid.rhos()) {
    double s = 0.0;
    for (double y : grid.ys()) {
      for (const Matrix& m : bar.evaluate(chart_coords(r, {y, 0.0}), 2, 1e-3 * r).d2) s = std::max(s, max_abs(m));
    }
    rho.push_back(std::log(r));
    sup.push_back(s);
  }
  EXPECT_GE(fit_decay_rate(rho, sup, Window{rho.front(), rho.back()}).exponent, -1.1);
}

TEST(CounterexampleMetric, RadialDerivativeBoundedAndLipschitzFails) {
  const CounterexampleMetric cm;
  const CompactifiedMetric m = make_counterexample_metric(cm);
  const AuditGrid grid = coarse_grid();
  std::vector<std::vector<double>> ys;
  for (double y : grid.ys()) ys.push_back({y, 0.0});
  const GbarDerivativeGrid g = gbar_derivative_grid(m, ys, grid.rhos());
  for (const auto& c : g.cells) EXPECT_LE(max_abs(c.d_rho), 2.0 * std::exp(2.0) + 1e-9);
  const LipschitzReport rep = lipschitz_verdict(g);
  EXPECT_EQ(rep.verdict, LipschitzVerdict::log_blowup) << rep.diagnostics;
  EXPECT_NEAR(rep.slope, 2.0, 0.05);
  EXPECT_GE(rep.r_squared, 0.99);
}

TEST(ChristoffelDerivative, MatchesDifferencesOnHyperbolic) {
  const CoordinateMetric full = make_hyperbolic(2, HyperbolicFiber::round_sample).full();
  const Vector x = chart_coords(0.8, {0.6, 1.1});
  const DenseTensor<4> d = christoffel_derivative(full.evaluate(x, 2, 1e-3));
  for (int m = 0; m < 3; ++m) {
    const auto gamma_at = [&](const Vector& xs) { return christoffel(full.evaluate(xs, 1, 1e-3)).gamma; };
    const DenseTensor<3> fd = fd::partial(gamma_at, x, m, 1e-3);
    for (int k = 0; k < 3; ++k)
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) EXPECT_NEAR(d(m, k, i, j), fd(k, i, j), 1e-9);
  }
  EXPECT_THROW(christoffel_derivative(full.evaluate(x, 1, 1e-3)), Error);
}

TEST(PerturbedFamily, ZeroProfileIsTheFlatTorusModel) {
  const FermiMetric p = make_perturbed_ah(2, Profile::zero(), 1.5);
  const FermiMetric t = make_hyperbolic(2, HyperbolicFiber::flat_torus);
  for (double r : {0.0, 1.0, 4.0})
    for (double y : {0.2, 2.0}) EXPECT_LT(max_abs(p.fiber({y, 0.5}, r) - t.fiber({y, 0.5}, r)), 1e-12 * std::exp(2 * r));
}

TEST(PerturbedFamily, CurvatureDecayRateAndMonotonicityInOmega) {
  const double e1 = perturbed_norm_exponent(1.0);
  const double e15 = perturbed_norm_exponent(1.5);
  const double e2 = perturbed_norm_exponent(2.0);
  EXPECT_GE(e15, 1.4);
  EXPECT_LT(e1, e15);
  EXPECT_LT(e15, e2);
}

TEST(HyperbolicGallery, BothFibersHaveConstantCurvatureMinusOne) {
  for (auto fiber : {HyperbolicFiber::round_sample, HyperbolicFiber::flat_torus}) {
    const CoordinateMetric full = make_hyperbolic(2, fiber).full();
    for (double r : {0.5, 2.0, 5.0}) {
      const MetricJet j = full.evaluate(chart_coords(r, {0.7, 1.3}), 2, 1e-3);
      const Tensor4 rk = riemann(j) + constant_curvature_tensor(j.g);
      EXPECT_LT(gnorm(rk, j.g), 1e-8) << r;
    }
  }
}

TEST(AuditGrid, SamplesIncludeEndpointsAndAxes) {
  const AuditGrid g;
  const auto rhos = g.rhos();
  EXPECT_EQ(rhos.size(), 49u);
  EXPECT_DOUBLE_EQ(rhos.front(), 1e-3);
  EXPECT_DOUBLE_EQ(rhos.back(), 1e-1);
  const auto ys = g.ys();
  EXPECT_EQ(ys.size(), 64u);
  EXPECT_EQ(ys[0], 0.0);
  EXPECT_NEAR(ys[16], kPi / 2, 1e-15);
  AuditGrid bad;
  bad.rho_min = 0.2;
  EXPECT_THROW(bad.rhos(), Error);
}

TEST(CounterexampleAudit, CoarseGridPassesEveryItem) {
  const CounterexampleMetric cm;
  const CounterexampleAudit a = counterexample_audit(cm, coarse_grid());
  EXPECT_LT(a.max_fy_error, 1e-8);
  for (const ExponentCheck* c : a.exponent_checks()) {
    ASSERT_TRUE(c->fit.has_value()) << c->name;
    EXPECT_TRUE(c->pass) << c->name << " exponent " << c->fit->exponent;
    EXPECT_TRUE(c->conclusive) << c->name;
    EXPECT_NEAR(c->fit->exponent, c->target, 0.25) << c->name;
  }
  EXPECT_TRUE(a.hessian_pass);
  EXPECT_TRUE(a.identity_pass) << a.max_identity_ratio;
  EXPECT_TRUE(a.convexity_pass);
  ASSERT_TRUE(a.rho0.has_value());
  EXPECT_DOUBLE_EQ(*a.rho0, 0.1);
  // Hess r / (rho^{-2} gbar) = 1 + rho eta, so the ratio tends to 1.
  EXPECT_NEAR(a.convexity_ratio.front(), 1.0, 2e-3);
  EXPECT_EQ(a.lipschitz.verdict, LipschitzVerdict::log_blowup);
  EXPECT_TRUE(a.passed());
}
