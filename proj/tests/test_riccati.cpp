#include "ahlab/errors.hpp"
#include "ahlab/gallery.hpp"
#include "ahlab/ode.hpp"
#include "ahlab/riccati.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>

using namespace ahlab;

namespace {

ScalarRiccatiProblem constant_forcing(double lambda0, double r1 = 20.0) {
  ScalarRiccatiProblem p;
  p.f = [](double) { return 1.0; };
  p.envelope_constant = 1e-300;
  p.lambda0 = lambda0;
  p.r1 = r1;
  return p;
}

RiccatiForcing scalar_forcing(int n, std::function<double(double)> q) {
  return [n, q](double r) { return Matrix(q(r) * Matrix::Identity(n, n)); };
}

ShapeMetricTrajectory synthetic(std::function<Matrix(double)> g, double r0, double r1, int n_samples) {
  ShapeMetricTrajectory t;
  for (double r : ode::uniform_grid(r0, r1, static_cast<std::size_t>(n_samples))) {
    ShapeMetricSample s;
    s.r = r;
    s.g = g(r);
    s.S = Matrix::Identity(s.g.rows(), s.g.cols());
    s.shape = {1.0, 1.0};
    s.metric = symmetric_eigen_range(s.g);
    t.samples.push_back(s);
  }
  return t;
}

}  // namespace

TEST(ScalarRiccati, FixedPoint) {
  const ScalarTrajectory t = integrate_scalar_riccati(constant_forcing(1.0));
  ASSERT_EQ(t.r.size(), kDefaultSamples);
  for (double l : t.lambda) EXPECT_NEAR(l, 1.0, 1e-14);
}

TEST(ScalarRiccati, CothSolution) {
  const ScalarTrajectory t = integrate_scalar_riccati(constant_forcing(2.0), 1e-10);
  const double shift = std::atanh(0.5);
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    EXPECT_NEAR(t.lambda[i], 1.0 / std::tanh(t.r[i] + shift), 1e-9);
  }
}

TEST(ScalarRiccati, DecayingPerturbationAgainstReference) {
  ScalarRiccatiProblem p;
  p.f = [](double r) { return 1.0 + std::exp(-r); };
  p.envelope_constant = 1.0;
  p.lambda0 = 2.0;
  const ScalarTrajectory t = integrate_scalar_riccati(p, 1e-9);
  const ScalarTrajectory ref = integrate_scalar_riccati(p, 1e-11);
  double sup = 0.0;
  for (std::size_t i = 0; i < t.r.size(); ++i) {
    EXPECT_NEAR(t.lambda[i], ref.lambda[i], 1e-8);
    if (t.r[i] >= 5.0) sup = std::max(sup, std::exp(t.r[i]) * std::abs(t.lambda[i] - 1.0));
  }
  EXPECT_TRUE(std::isfinite(sup));
  EXPECT_LT(sup, 10.0);
}

TEST(ScalarRiccati, MonotoneTowardFixedPoint) {
  for (double l0 : {0.05, 0.5, 0.99, 1.01, 3.0, 50.0}) {
    const ScalarTrajectory t = integrate_scalar_riccati(constant_forcing(l0, 8.0));
    for (std::size_t i = 1; i < t.r.size(); ++i) {
      if (l0 > 1.0) {
        EXPECT_LT(t.lambda[i], t.lambda[i - 1]);
        EXPECT_GT(t.lambda[i], 1.0);
      } else {
        EXPECT_GT(t.lambda[i], t.lambda[i - 1]);
        EXPECT_LT(t.lambda[i], 1.0);
      }
    }
  }
}

TEST(ScalarRiccati, ValidationAndPositivityLoss) {
  ScalarRiccatiProblem p = constant_forcing(0.0);
  EXPECT_THROW(validate(p), Error);
  p = constant_forcing(1.0);
  p.f = [](double r) { return 1.0 + std::exp(-r); };
  p.envelope_constant = 0.5;
  EXPECT_THROW(validate(p), Error);

  ScalarRiccatiProblem neg;
  neg.f = [](double) { return -1.0; };
  neg.envelope_constant = 2.0 * std::exp(5.0);
  neg.lambda0 = 0.5;
  neg.r1 = 5.0;
  try {
    integrate_scalar_riccati(neg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::positivity_loss);
    ASSERT_TRUE(e.where().has_value());
    // lambda = tan(atan(0.5) - r) reaches zero at r = atan(0.5).
    EXPECT_NEAR(*e.where(), std::atan(0.5), 0.05);
  }
}

TEST(Envelope, FixedPointBelowFloor) {
  const EnvelopeReport rep = lemma_decay_envelope_check(integrate_scalar_riccati(constant_forcing(1.0)), 0.0, 1.0);
  EXPECT_TRUE(rep.passed());
  EXPECT_TRUE(rep.below_floor);
  EXPECT_FALSE(rep.fit.has_value());
}

TEST(Envelope, CothTailExponent) {
  const EnvelopeReport rep =
      lemma_decay_envelope_check(integrate_scalar_riccati(constant_forcing(2.0), 1e-12), 1e-300, 2.0);
  EXPECT_TRUE(rep.passed());
  ASSERT_TRUE(rep.r_half.has_value());
  EXPECT_DOUBLE_EQ(*rep.r_half, 0.0);
  EXPECT_DOUBLE_EQ(rep.k_upper, 3.0);
  ASSERT_TRUE(rep.fit.has_value());
  EXPECT_NEAR(rep.fit->exponent, -2.0, 0.02);
}

TEST(Envelope, OscillatingForcing) {
  ScalarRiccatiProblem p;
  p.f = [](double r) { return 1.0 + std::exp(-r) * std::cos(3.0 * r); };
  p.envelope_constant = 1.0;
  p.lambda0 = 3.0;
  const EnvelopeReport rep = lemma_decay_envelope_check(integrate_scalar_riccati(p, 1e-12), 1.0, 3.0);
  EXPECT_TRUE(rep.upper_holds);
  EXPECT_TRUE(rep.lower_holds);
  ASSERT_TRUE(rep.fit.has_value());
  EXPECT_LE(rep.fit->exponent, -1.0 + 0.05);
}

TEST(Envelope, StartingBelowHalfActivatesLater) {
  ScalarRiccatiProblem p = constant_forcing(0.1);
  p.r1 = 10.0;
  const EnvelopeReport rep = lemma_decay_envelope_check(integrate_scalar_riccati(p), 0.0, 0.1);
  ASSERT_TRUE(rep.r_half.has_value());
  // lambda = tanh(r + atanh(0.1)) passes 1/2 at r = atanh(0.5) - atanh(0.1).
  EXPECT_NEAR(*rep.r_half, std::atanh(0.5) - std::atanh(0.1), 0.03);
  EXPECT_LT(1.0 - rep.k_lower * std::exp(-*rep.r_half), 0.5);
  EXPECT_TRUE(rep.passed());
}

TEST(Envelope, UpperEnvelopeHoldsOverRandomProblems) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> amp(-2.0, 2.0), freq(0.0, 5.0), l0(0.2, 6.0);
  for (int k = 0; k < 25; ++k) {
    const double a = amp(rng), w = freq(rng);
    ScalarRiccatiProblem p;
    p.f = [a, w](double r) { return 1.0 + a * std::exp(-r) * std::sin(w * r + 0.3); };
    p.envelope_constant = std::abs(a);
    p.lambda0 = l0(rng);
    p.r1 = 15.0;
    try {
      const EnvelopeReport rep = lemma_decay_envelope_check(integrate_scalar_riccati(p), p.envelope_constant, p.lambda0);
      EXPECT_TRUE(rep.upper_holds) << k;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::positivity_loss);
    }
  }
}

TEST(ShapeMetric, HyperbolicClosedForm) {
  const int n = 2;
  const Matrix ring = round_sphere_metric({0.9, 0.2});
  const double s1 = std::sinh(1.0);
  const auto traj = integrate_shape_metric(scalar_forcing(n, [](double) { return 1.0; }),
                                           (1.0 / std::tanh(1.0)) * Matrix::Identity(n, n), s1 * s1 * ring, 0.0,
                                           20.0);
  double err = 0.0;
  for (const auto& s : traj.samples) {
    const double coth = 1.0 / std::tanh(1.0 + s.r);
    const Matrix g = std::pow(std::sinh(1.0 + s.r), 2) * ring;
    err = std::max(err, max_abs(s.S - coth * Matrix::Identity(n, n)) / coth);
    err = std::max(err, max_abs(s.g - g) / max_abs(g));
  }
  EXPECT_LE(err, 1e-6);
}

TEST(ShapeMetric, HorosphericalFixedPoint) {
  Matrix g0(2, 2);
  g0 << 2.0, 0.3, 0.3, 1.0;
  const auto traj =
      integrate_shape_metric(scalar_forcing(2, [](double) { return 1.0; }), Matrix::Identity(2, 2), g0, 0.0, 10.0);
  for (const auto& s : traj.samples) {
    EXPECT_LT(max_abs(s.S - Matrix::Identity(2, 2)), 1e-12);
    EXPECT_LT(max_abs(s.g - std::exp(2.0 * s.r) * g0) / std::exp(2.0 * s.r), 1e-8);
  }
  const ComparisonReport rep = shape_metric_estimate_check(traj);
  EXPECT_LT(rep.C, 1e-10);
  const EigenRange e = symmetric_eigen_range(g0);
  EXPECT_NEAR(rep.L1, e.min, 1e-8);
  EXPECT_NEAR(rep.L2, e.max, 1e-8);
  EXPECT_TRUE(rep.finite);
}

TEST(ShapeMetric, PrescribedDecayShapeEstimate) {
  const auto traj = integrate_shape_metric(scalar_forcing(2, [](double r) { return 1.0 + std::exp(-1.5 * r); }),
                                           2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0, 25.0);
  const ComparisonReport rep = shape_metric_estimate_check(traj, Window{5.0, 25.0});
  EXPECT_TRUE(rep.finite);
  EXPECT_GT(rep.C, 0.0);
  EXPECT_LT(rep.C, 10.0);
  // e^r |lambda - 1| tends to 0 for this forcing; the reference run agrees.
  const auto ref = integrate_shape_metric(scalar_forcing(2, [](double r) { return 1.0 + std::exp(-1.5 * r); }),
                                          2.0 * Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0, 25.0, 1e-11);
  EXPECT_NEAR(shape_metric_estimate_check(ref, Window{5.0, 25.0}).C, rep.C, 1e-6);
}

TEST(ShapeMetric, HyperbolicEstimates) {
  const double s1 = std::sinh(1.0);
  Matrix g0(2, 2);
  g0 << 1.0, 0.0, 0.0, 3.0;
  const auto traj = integrate_shape_metric(scalar_forcing(2, [](double) { return 1.0; }),
                                           (1.0 / std::tanh(1.0)) * Matrix::Identity(2, 2), s1 * s1 * g0, 0.0, 20.0);
  const ComparisonReport rep = shape_metric_estimate_check(traj);
  // coth(1 + r) - 1 ~ 2 e^{-2(1+r)}, so e^r |coth - 1| is largest at the window start.
  double c = 0.0;
  for (const auto& s : traj.samples) {
    if (s.r >= rep.window.lo) c = std::max(c, std::exp(s.r) * (1.0 / std::tanh(1.0 + s.r) - 1.0));
  }
  EXPECT_NEAR(rep.C, c, 1e-6 * c);
  EXPECT_NEAR(rep.L1 / rep.L2, 1.0 / 3.0, 1e-6);
}

TEST(ShapeMetric, SelfAdjointnessPreserved) {
  Matrix g0(3, 3);
  g0 << 2.0, 0.4, 0.1, 0.4, 1.5, -0.2, 0.1, -0.2, 1.0;
  // S0 = g0^{-1} h0 with h0 symmetric positive definite.
  Matrix h0(3, 3);
  h0 << 3.0, 0.2, 0.0, 0.2, 2.0, 0.5, 0.0, 0.5, 2.5;
  const Matrix s0 = g0.inverse() * h0;
  // Scalar forcing commutes with everything, so h = g S must stay symmetric.
  const double tol = 1e-9;
  const auto traj = integrate_shape_metric(scalar_forcing(3, [](double r) { return 1.0 + std::exp(-r) * std::cos(2.0 * r); }),
                                           s0, g0, 0.0, 10.0, tol);
  for (const auto& s : traj.samples) EXPECT_LE(s.symmetry_defect, 10.0 * tol);
}

TEST(ShapeMetric, DiagonalSystemDecouples) {
  const double tol = 1e-9;
  const RiccatiForcing q = [](double r) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = 1.0 + std::exp(-r);
    m(1, 1) = 1.0 + std::exp(-r) * std::cos(3.0 * r);
    return m;
  };
  Matrix s0 = Matrix::Zero(2, 2);
  s0(0, 0) = 2.0;
  s0(1, 1) = 0.7;
  const auto traj = integrate_shape_metric(q, s0, Matrix::Identity(2, 2), 0.0, 20.0, tol);
  ScalarRiccatiProblem a;
  a.f = [](double r) { return 1.0 + std::exp(-r); };
  a.envelope_constant = 1.0;
  a.lambda0 = 2.0;
  ScalarRiccatiProblem b;
  b.f = [](double r) { return 1.0 + std::exp(-r) * std::cos(3.0 * r); };
  b.envelope_constant = 1.0;
  b.lambda0 = 0.7;
  const auto ta = integrate_scalar_riccati(a, tol);
  const auto tb = integrate_scalar_riccati(b, tol);
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    EXPECT_NEAR(traj.samples[i].S(0, 0), ta.lambda[i], 10.0 * tol);
    EXPECT_NEAR(traj.samples[i].S(1, 1), tb.lambda[i], 10.0 * tol);
    EXPECT_EQ(traj.samples[i].S(0, 1), 0.0);
  }
}

TEST(ShapeMetric, MetricScalingOnlyScalesL) {
  const RiccatiForcing q = scalar_forcing(2, [](double r) { return 1.0 + std::exp(-1.5 * r); });
  Matrix g0(2, 2);
  g0 << 1.0, 0.2, 0.2, 2.0;
  const Matrix s0 = 1.5 * Matrix::Identity(2, 2);
  const auto a = shape_metric_estimate_check(integrate_shape_metric(q, s0, g0, 0.0, 20.0));
  const auto b = shape_metric_estimate_check(integrate_shape_metric(q, s0, 4.0 * g0, 0.0, 20.0));
  EXPECT_NEAR(a.C, b.C, 1e-9);
  EXPECT_NEAR(b.L1, 4.0 * a.L1, 1e-7 * b.L1);
  EXPECT_NEAR(b.L2, 4.0 * a.L2, 1e-7 * b.L2);
}

TEST(ShapeMetric, ConvexityLoss) {
  try {
    integrate_shape_metric(scalar_forcing(2, [](double) { return -1.0; }), 0.5 * Matrix::Identity(2, 2),
                           Matrix::Identity(2, 2), 0.0, 5.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::convexity_loss);
    ASSERT_TRUE(e.where().has_value());
    EXPECT_NEAR(*e.where(), std::atan(0.5), 0.05);
  }
  EXPECT_THROW(integrate_shape_metric(scalar_forcing(2, [](double) { return 1.0; }), -Matrix::Identity(2, 2),
                                      Matrix::Identity(2, 2), 0.0, 5.0),
               Error);
}

TEST(ShapeMetric, FermiMetricSource) {
  const FermiMetric m = make_hyperbolic(2, HyperbolicFiber::flat_torus);
  FermiCurvatureSource src{&m, {0.1, 0.2}, 1e-3};
  const auto traj = integrate_shape_metric(src, Matrix::Identity(2, 2), Matrix::Identity(2, 2), 0.0, 5.0);
  for (const auto& s : traj.samples) EXPECT_LT(max_abs(s.S - Matrix::Identity(2, 2)), 1e-10);

  const FermiMetric fd_only = ahlab::testing::values_only(make_perturbed_ah(2, Profile::sine(), 1.5));
  const FermiMetric exact = make_perturbed_ah(2, Profile::sine(), 1.5);
  const double y = 0.4;
  const Matrix s0 = perturbed_shape(Profile::sine(), 1.5, y, 1.0) * Matrix::Identity(2, 2);
  const Matrix g0 = exact.fiber({y, 0.0}, 1.0);
  const auto t1 = integrate_shape_metric(FermiCurvatureSource{&fd_only, {y, 0.0}, 1e-3}, s0, g0, 1.0, 6.0, 1e-9, 64);
  for (const auto& s : t1.samples) {
    EXPECT_NEAR(s.S(0, 0), perturbed_shape(Profile::sine(), 1.5, y, s.r), 1e-6);
  }
}

TEST(SinhRadius, ExactSinhProfile) {
  const Matrix ref = Matrix::Identity(2, 2);
  const auto t = synthetic([](double r) { return Matrix(std::pow(std::sinh(r), 2) * Matrix::Identity(2, 2)); }, 0.5, 15.0, 200);
  EXPECT_NEAR(sinh_comparison_radius(t, ref).radius, 0.0, 1e-6);
}

TEST(SinhRadius, HorosphericalProfileMatchesBruteForce) {
  const Matrix ref = Matrix::Identity(2, 2);
  const auto t = synthetic([](double r) { return Matrix(std::exp(2.0 * r) * Matrix::Identity(2, 2)); }, 0.5, 15.0, 200);
  const double radius = sinh_comparison_radius(t, ref).radius;
  // Brute force: smallest R on a fine scan with both inequalities at every sample r > R.
  auto ok = [&](double R) {
    for (const auto& s : t.samples) {
      if (s.r <= R) continue;
      const double e = std::exp(2.0 * s.r);
      if (std::pow(std::sinh(s.r - R), 2) > e * (1 + 1e-12) || std::pow(std::sinh(s.r + R), 2) < e * (1 - 1e-12)) return false;
    }
    return true;
  };
  double brute = -1.0;
  for (double R = 0.0; R < 7.5; R += 1e-5) {
    if (ok(R)) {
      brute = R;
      break;
    }
  }
  ASSERT_GT(brute, 0.0);
  EXPECT_NEAR(radius, brute, 2e-5);
}

TEST(SinhRadius, HyperbolicTrajectoryFromRadiusOne) {
  const double s1 = std::sinh(1.0);
  const auto traj = integrate_shape_metric(scalar_forcing(2, [](double) { return 1.0; }),
                                           (1.0 / std::tanh(1.0)) * Matrix::Identity(2, 2), s1 * s1 * Matrix::Identity(2, 2),
                                           0.0, 15.0);
  // In the trajectory's own r the metric is sinh^2(r + 1) ref, so R = 1.
  const SinhComparison c = sinh_comparison_radius(traj, Matrix::Identity(2, 2));
  EXPECT_NEAR(c.radius, 1.0, 1e-5);
  EXPECT_GE(c.radius_from_bounds, c.radius - 1e-6);
}

TEST(SinhRadius, UnboundedEstimateHasNoRadius) {
  const auto t = synthetic([](double r) { return Matrix(std::exp(3.0 * r) * Matrix::Identity(1, 1)); }, 0.5, 15.0, 100);
  try {
    sinh_comparison_radius(t, Matrix::Identity(1, 1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::no_finite_radius);
  }
}

TEST(ShapeMetric, HyperbolicRunIsFast) {
  const auto t0 = std::chrono::steady_clock::now();
  const double s1 = std::sinh(1.0);
  integrate_shape_metric(scalar_forcing(3, [](double) { return 1.0; }), (1.0 / std::tanh(1.0)) * Matrix::Identity(3, 3),
                         s1 * s1 * Matrix::Identity(3, 3), 0.0, 20.0);
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
}
