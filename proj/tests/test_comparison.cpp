#include "ahlab/comparison.hpp"
#include "ahlab/errors.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

using namespace ahlab;

namespace {

ModelSystemParams params(double c, double omega) {
  ModelSystemParams p;
  p.c = c;
  p.Omega = omega;
  return p;
}

}  // namespace

TEST(ModelSystem, DecoupledLimitIsConstant) {
  ModelSystemParams p = params(0.0, -0.5);
  p.u0 = 2.0;
  p.v0 = 3.0;
  const ModelTrajectory t = solve_model_system(p, 10.0);
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    EXPECT_DOUBLE_EQ(t.u[i], 2.0);
    EXPECT_DOUBLE_EQ(t.v[i], 3.0);
  }
}

TEST(ModelSystem, GrowthExponents) {
  ModelRunOptions opts;
  opts.cap = 1e30;
  const ModelTrajectory t = solve_model_system(params(1.0, -0.5), 30.0, opts);
  ASSERT_FALSE(t.halted);
  ASSERT_TRUE(t.u_fit && t.v_fit);
  EXPECT_NEAR(t.u_fit->exponent, 1.5, 0.05);
  EXPECT_LE(t.v_fit->exponent, 0.02);
  EXPECT_TRUE(std::isfinite(t.v_sup));
  EXPECT_TRUE(t.paper_regime);
}

TEST(ModelSystem, MatchesTighterReference) {
  ModelRunOptions a, b;
  a.cap = b.cap = 1e30;
  b.tol = a.tol / 100.0;
  const ModelTrajectory x = solve_model_system(params(1.0, -0.5), 20.0, a);
  const ModelTrajectory y = solve_model_system(params(1.0, -0.5), 20.0, b);
  for (std::size_t i = 0; i < x.r.size(); ++i) {
    EXPECT_NEAR(x.u[i] / y.u[i], 1.0, 1e-6);
    EXPECT_NEAR(x.v[i] / y.v[i], 1.0, 1e-6);
  }
}

TEST(ModelSystem, FastDecayingForcingLeavesLinearGrowth) {
  // With Omega = -2 the forcing decays, but the homogeneous u still grows like e^r.
  ModelRunOptions opts;
  opts.cap = 1e30;
  const ModelTrajectory t = solve_model_system(params(1.0, -2.0), 30.0, opts);
  ASSERT_TRUE(t.u_fit);
  EXPECT_NEAR(t.u_fit->exponent, 1.0, 0.05);
  EXPECT_LE(t.v_fit->exponent, 0.02);
}

TEST(ModelSystem, CapHaltsWithLabel) {
  const ModelTrajectory t = solve_model_system(params(1.0, -0.5), 30.0);
  ASSERT_TRUE(t.halted);
  EXPECT_EQ(t.halted->label, "cap");
  EXPECT_LT(t.r.back(), 30.0);
}

TEST(ModelSystem, Preconditions) {
  ModelSystemParams p;
  p.u0 = 0.0;
  EXPECT_THROW(solve_model_system(p, 1.0), Error);
  EXPECT_FALSE(params(1.0, 0.5).paper_regime());
}

TEST(Reduction, CoefficientsForUnitCoupling) {
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  for (double r : {0.0, 0.7, 3.0, 10.0}) {
    const double e = std::exp(-r);
    EXPECT_NEAR(red.for_v.p(r), 2.0 - 2.0 * e, 1e-15);
    EXPECT_NEAR(red.for_v.q(r), e * (e - 2.0), 1e-15);
    EXPECT_NEAR(red.for_v.forcing(r), std::exp(-0.5 * r), 1e-15);
  }
  EXPECT_NEAR(red.for_v.p(40.0), 2.0, 1e-15);
  EXPECT_NEAR(red.for_v.q(40.0), 0.0, 1e-15);
  EXPECT_NEAR(red.for_u.p(40.0), -1.0, 1e-15);
  EXPECT_NEAR(red.for_u.q(40.0), 0.0, 1e-15);
  EXPECT_THROW(reduce_to_second_order(params(0.0, -0.5)), Error);
}

TEST(Reduction, RoundTrip) {
  for (double c : {0.5, 1.0, 2.0}) {
    for (double om : {-0.25, -0.5, -1.0}) {
      const RoundTripReport rep = model_round_trip(params(c, om), 20.0, 1e-12);
      EXPECT_LE(rep.v_residual, 1e-6) << c << " " << om;
      EXPECT_LE(rep.u_residual, 1e-6) << c << " " << om;
      EXPECT_LE(rep.v_gap, 1e-6) << c << " " << om;
      EXPECT_LE(rep.u_gap, 1e-6) << c << " " << om;
    }
  }
}

TEST(Homogeneous, ConstantCoefficientLimit) {
  SecondOrderODE eq;
  eq.which = Unknown::for_v;
  eq.p = [](double) { return 2.0; };
  eq.q = [](double) { return 0.0; };
  eq.forcing = [](double) { return 0.0; };
  const HomogeneousBasis b = homogeneous_basis(eq, 0.0, 10.0);
  for (std::size_t i = 0; i < b.r.size(); ++i) {
    // Dominant is y0 + y0'(1 - e^{-2r}) / 2; recessive a multiple of e^{-2r}.
    const double y0 = b.dominant.front(), dy0 = b.d_dominant.front();
    EXPECT_NEAR(b.dominant[i], y0 + 0.5 * dy0 * (1.0 - std::exp(-2.0 * b.r[i])), 1e-8);
    EXPECT_NEAR(b.recessive[i] * std::exp(2.0 * b.r[i]), b.recessive.front(), 1e-7);
    EXPECT_NEAR(b.recessive[i] * b.d_dominant[i] - b.dominant[i] * b.d_recessive[i], b.wronskian[i],
                1e-9 * b.wronskian.front());
  }
  const ExponentReport rep = homogeneous_asymptotics(eq, 0.0, 10.0);
  EXPECT_TRUE(rep.matches(0.01));
}

TEST(Homogeneous, ExponentsAcrossCoupling) {
  for (double c : {0.5, 1.0, 2.0}) {
    const Reduction red = reduce_to_second_order(params(c, -0.5));
    const ExponentReport v = homogeneous_asymptotics(red.for_v, 2.0, 25.0);
    const ExponentReport u = homogeneous_asymptotics(red.for_u, 2.0, 25.0);
    EXPECT_TRUE(v.conclusive);
    EXPECT_TRUE(u.conclusive);
    EXPECT_NEAR(v.recessive.exponent, -2.0, 0.05) << c;
    EXPECT_NEAR(v.dominant.exponent, 0.0, 0.02) << c;
    EXPECT_NEAR(u.recessive.exponent, 0.0, 0.05) << c;
    EXPECT_NEAR(u.dominant.exponent, 1.0, 0.02) << c;
  }
}

TEST(Homogeneous, BasisSolvesEquation) {
  // Forward integration from the recessive data can only differ from the
  // deflated recessive solution by a multiple of the dominant one.
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  const HomogeneousBasis b = homogeneous_basis(red.for_u, 2.0, 12.0);
  const SecondOrderTrajectory t =
      integrate_second_order(red.for_u, 2.0, 12.0, b.recessive.front(), b.d_recessive.front(), true, 1e-12, 2048);
  const double k_end = (t.y.back() - b.recessive.back()) / b.dominant.back();
  for (std::size_t i = t.r.size() / 4; i < t.r.size(); ++i) {
    EXPECT_NEAR((t.y[i] - b.recessive[i]) / b.dominant[i], k_end, 1e-8);
  }
}

TEST(VariationOfParameters, VSystemExponents) {
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  const ParticularSolution ps = variation_of_parameters(red.for_v, 0.0, 30.0);
  ASSERT_TRUE(ps.y_fit);
  EXPECT_NEAR(ps.y_fit->exponent, -0.5, 0.1);
  EXPECT_NEAR(ps.det_fit.exponent, -2.0, 0.05);
  EXPECT_DOUBLE_EQ(ps.expected_exponent, -0.5);
}

TEST(VariationOfParameters, USystemExponent) {
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  const ParticularSolution ps = variation_of_parameters(red.for_u, 0.0, 25.0);
  ASSERT_TRUE(ps.y_fit);
  EXPECT_NEAR(ps.y_fit->exponent, 1.5, 0.1);
}

TEST(VariationOfParameters, MatchesDirectIntegration) {
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  const ParticularSolution ps = variation_of_parameters(red.for_v, 0.0, 15.0);
  const SecondOrderTrajectory d =
      integrate_second_order(red.for_v, 0.0, 15.0, ps.y.front(), ps.dy.front(), false, 1e-12, 2048);
  ASSERT_EQ(d.r.size(), ps.r.size());
  for (std::size_t i = 0; i < d.r.size(); ++i) {
    EXPECT_NEAR(d.y[i], ps.y[i], 1e-6 * (1.0 + std::abs(ps.y[i])));
  }
}

TEST(VariationOfParameters, ZeroForcing) {
  Reduction red = reduce_to_second_order(params(1.0, -0.5));
  red.for_v.forcing = [](double) { return 0.0; };
  const ParticularSolution ps = variation_of_parameters(red.for_v, 0.0, 10.0);
  for (double y : ps.y) EXPECT_EQ(y, 0.0);
  EXPECT_FALSE(ps.y_fit);
}

TEST(VariationOfParameters, ConditionThreshold) {
  const Reduction red = reduce_to_second_order(params(1.0, -0.5));
  try {
    variation_of_parameters(red.for_v, 0.0, 30.0, 1e-10, 1.0);
    FAIL() << "expected ill_conditioned";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::ill_conditioned);
  }
}

TEST(Positivity, Examples) {
  ModelRunOptions opts;
  opts.cap = 1e30;
  EXPECT_TRUE(positivity_persistence(params(1.0, -0.5), 30.0, opts).positive);
  ModelSystemParams p = params(10.0, -0.5);
  p.u0 = p.v0 = 1e-6;
  const PositivityVerdict v = positivity_persistence(p, 30.0);
  EXPECT_TRUE(v.positive);
  EXPECT_TRUE(v.halted);
  EXPECT_TRUE(positivity_persistence(params(0.0, -0.5), 30.0).positive);
}

TEST(Compare, ExactSymmetricSystem) {
  const Coefficient one = [](double) { return 1.0; };
  const Coefficient zero = [](double) { return 0.0; };
  const auto sub = [](double t) { return 0.99 * std::exp(2.0 * t); };
  ComparisonProblem prob{one, one, one, one, zero, zero, sub, sub, 1.0, 1.0, 0.0, 3.0};
  const ComparisonVerdict v = ode_compare(prob);
  EXPECT_TRUE(v.holds);
  for (std::size_t i = 0; i < v.t.size(); ++i) EXPECT_NEAR(v.u[i] / std::exp(2.0 * v.t[i]), 1.0, 1e-8);
}

TEST(Compare, ShrunkSystemIsSubSolution) {
  const Coefficient one = [](double) { return 1.0; };
  const Coefficient half = [](double t) { return 0.5 + std::exp(-t); };
  ComparisonProblem base{one, half, half, one, half, one, {}, {}, 1.0, 1.0, 0.0, 3.0};
  // Shrunk system integrated with forward Euler on a fine grid, interpolated.
  std::vector<double> t, x, y;
  double xs = 0.9, ys = 0.9;
  const std::size_t n = 30001;
  const double h = 3.0 / (n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const double s = i * h;
    t.push_back(s);
    x.push_back(xs);
    y.push_back(ys);
    const double dx = 0.9 * (xs + half(s) * ys + half(s));
    const double dy = 0.9 * (half(s) * xs + ys + 1.0);
    xs += h * dx;
    ys += h * dy;
  }
  base.x = interpolant(t, x);
  base.y = interpolant(t, y);
  const ComparisonVerdict v = ode_compare(base);
  EXPECT_TRUE(v.holds);
  EXPECT_LT(v.max_x_minus_u, 0.0);
}

TEST(Compare, Preconditions) {
  const Coefficient one = [](double) { return 1.0; };
  const Coefficient zero = [](double) { return 0.0; };
  const Coefficient dips = [](double t) { return t - 1.0; };
  const auto same = [](double t) { return std::exp(2.0 * t); };
  ComparisonProblem eq{one, one, one, one, zero, zero, same, same, 1.0, 1.0, 0.0, 1.0};
  try {
    ode_compare(eq);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::precondition);
  }
  ComparisonProblem bad{dips, one, one, one, zero, zero, zero, zero, 1.0, 1.0, 0.0, 2.0};
  try {
    ode_compare(bad);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::hypothesis_violation);
  }
}

TEST(Compare, DetectsViolation) {
  // x grows faster than any solution of the pair: the verdict must fail.
  const Coefficient one = [](double) { return 1.0; };
  const Coefficient zero = [](double) { return 0.0; };
  ComparisonProblem prob{one, one, one, one, zero, zero, [](double t) { return 0.5 * std::exp(4.0 * t); },
                         [](double) { return 0.0; }, 1.0, 1.0, 0.0, 2.0};
  const ComparisonVerdict v = ode_compare(prob);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.first_violation);
  EXPECT_GT(v.max_x_minus_u, 0.0);
}

TEST(Compare, Fuzz) {
  const auto start = std::chrono::steady_clock::now();
  const FuzzSummary s = fuzz_ode_compare(20240601, 200);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(s.instances, 200u);
  EXPECT_EQ(s.violations, 0u);
  EXPECT_EQ(s.records.size(), 200u);
  EXPECT_LT(secs, 30.0);
  const FuzzSummary again = fuzz_ode_compare(20240601, 5);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(again.records[i].coefficients, s.records[i].coefficients);
}

TEST(ModelSystem, ForcingMonotonicity) {
  ModelRunOptions lo, hi;
  lo.cap = hi.cap = 1e30;
  for (double scale : {0.5, 1.0, 2.0}) {
    lo.forcing_scale = scale;
    hi.forcing_scale = scale * 1.5;
    const ModelTrajectory a = solve_model_system(params(1.0, -0.5), 20.0, lo);
    const ModelTrajectory b = solve_model_system(params(1.0, -0.5), 20.0, hi);
    for (std::size_t i = 0; i < a.r.size(); ++i) {
      EXPECT_GE(b.u[i], a.u[i] * (1.0 - 1e-9));
      EXPECT_GE(b.v[i], a.v[i] * (1.0 - 1e-9));
    }
  }
}

TEST(ModelSystem, GrowthBoundsAcrossSweep) {
  // The u bound applies where the forcing outgrows the homogeneous e^r mode.
  ModelRunOptions opts;
  opts.cap = 1e30;
  for (double c : {0.5, 1.0, 2.0}) {
    for (double om : {-0.25, -0.5}) {
      const ModelTrajectory t = solve_model_system(params(c, om), 30.0, opts);
      ASSERT_TRUE(t.u_fit && t.v_fit);
      EXPECT_LE(t.v_fit->exponent, 0.05) << c << " " << om;
      EXPECT_LE(t.u_fit->exponent, 2.0 + om + 0.05) << c << " " << om;
    }
  }
}
