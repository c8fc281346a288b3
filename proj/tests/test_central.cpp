#include "support.hpp"

#include <gtest/gtest.h>

using namespace pairspace;
using testing_support::bisect;

namespace {

const MassSystem<double> kEqual({1.0, 1.0, 1.0});
const PotentialLaw<double> kNewton(1.0);

// E(x) written out independently of the library.
double E_direct(double x, double m1, double m2, double m3, double n) {
  const double M = m1 + m2 + m3;
  return M * (x - std::pow(x, -(n + 1))) + (m1 - m3 * x) * (1 + std::pow(x, -(n + 1)) - std::pow(1 + x, -(n + 1)));
}

}  // namespace

TEST(Rotation, CubeIsIdentityAndPlanarSumVanishes) {
  const Mat3d r = rotation_third<double>();
  EXPECT_LT((r * r * r - Mat3d::Identity()).norm(), 1e-15);
  const Mat3d sum = Mat3d::Identity() + r + r * r;
  const double planar = sum.topLeftCorner<2, 2>().norm();
  EXPECT_LT(planar, 1e-15);
  // The z axis is fixed by the rotation, so the full sum has 3 there.
  EXPECT_NEAR(sum(2, 2), 3.0, 1e-15);
}

TEST(Lagrange, CircularOmega) {
  EXPECT_NEAR(lagrange_circular_omega(kEqual, kNewton, 1.0), std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(lagrange_circular_omega(kEqual, PotentialLaw<double>(2.0), 2.0), std::sqrt(6.0 / 8.0), 1e-15);
}

TEST(Lagrange, ConstructedStateIsEquilateralAndRealizable) {
  const MassSystem<double> ms({1.0, 2.0, 3.0});
  const auto s = lagrange_circular_initial(ms, kNewton, 1.5);
  for (const auto& q : s.q) EXPECT_NEAR(q.norm(), 1.5, 1e-14);
  EXPECT_LT(max_triangle_residual(s).max_residual, 1e-15);
  auto velocities = s;
  velocities.q = s.qdot;
  EXPECT_LT(max_triangle_residual(velocities).max_residual, 1e-14);
  EXPECT_THROW(lagrange_circular_initial(ms, kNewton, 0.0), DomainError);
}

TEST(Lagrange, RejectsNonPlanarPairMotion) {
  std::vector<Pair12Sample<double>> p{{0.0, Vec3d(1, 0, 0.1), Vec3d::Zero()}};
  EXPECT_THROW(lagrange_construct(p), DomainError);
}

TEST(Lagrange, NumericPairMotionMatchesAnalytic) {
  const MassSystem<double> ms({1.0, 2.0, 3.0});
  const double w = lagrange_circular_omega(ms, kNewton, 1.0);
  IntegratorConfig cfg;
  cfg.t_end = 2 * pi<double>() / w;
  cfg.monitor_every = 100;
  const auto num = solve_pair12<double>(ms, kNewton, Vec3d(1, 0, 0), Vec3d(0, w, 0), cfg);
  for (const auto& p : num) {
    const auto a = lagrange_circular_pair12(ms, kNewton, 1.0, p.time);
    EXPECT_LT((p.q - a.q).norm(), 1e-8);
  }
  const auto states = lagrange_construct(num);
  EXPECT_EQ(states.size(), num.size());
}

TEST(EFunction, Examples) {
  // Equal end masses: x = 1 is the root.
  EXPECT_NEAR(E_of_x(1.0, MassSystem<double>({2.0, 5.0, 2.0}), kNewton), 0.0, 1e-14);
  // m1 = 2, m3 = 1, any m2: E(1) = (m1 - m3)(1 + 1 - 1/4) = 1.75.
  for (double m2 : {0.5, 1.0, 7.0}) EXPECT_NEAR(E_of_x(1.0, MassSystem<double>({2.0, m2, 1.0}), kNewton), 1.75, 1e-14);
  EXPECT_THROW(E_of_x(0.0, kEqual, kNewton), DomainError);
  EXPECT_THROW(E_of_x(-1.0, kEqual, kNewton), DomainError);
}

TEST(EFunction, ExpandedFormAndDirectFormAgree) {
  sampling::Rng rng(61);
  for (int rep = 0; rep < 100; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const double n = rng.uniform(0.5, 3.0);
    const PotentialLaw<double> law(n);
    const double x = rng.log_uniform(0.05, 20.0);
    const double sc = E_scale(x, ms, law);
    EXPECT_NEAR(E_of_x(x, ms, law), E_of_x_expanded(x, ms, law), 1e-13 * sc);
    EXPECT_NEAR(E_of_x(x, ms, law), E_direct(x, ms.mass(0), ms.mass(1), ms.mass(2), n), 1e-13 * sc);
  }
}

TEST(EFunction, ValueAtXL) {
  sampling::Rng rng(62);
  for (int rep = 0; rep < 50; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const double xl = x_L(ms, law);
    EXPECT_NEAR(E_at_x_L(ms, law), E_of_x(xl, ms, law), 1e-12 * E_scale(xl, ms, law));
  }
}

TEST(EDerivative, EqualMassValueAndFiniteDifference) {
  // (M - m3) + 2(M - m1) + 2(m1 + m3)/8 + m3(1 - 1/4) at x = 1, n = 1.
  EXPECT_NEAR(E_derivative(1.0, kEqual, kNewton), 7.25, 1e-14);
  sampling::Rng rng(63);
  for (int rep = 0; rep < 50; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const double x = rng.log_uniform(0.1, 10.0);
    const double h = 1e-5 * x;
    const double fd = (E_of_x(x + h, ms, law) - E_of_x(x - h, ms, law)) / (2 * h);
    const double d = E_derivative(x, ms, law);
    EXPECT_GT(d, 0.0);
    EXPECT_NEAR(fd, d, 1e-6 * d);
  }
}

TEST(EulerAlpha, EqualMassesGiveUnitRatio) {
  for (double n : {0.5, 1.0, 2.0, 3.0}) EXPECT_NEAR(euler_alpha(kEqual, PotentialLaw<double>(n)).alpha, 1.0, 1e-14);
}

TEST(EulerAlpha, MatchesBisectionOracle) {
  sampling::Rng rng(64);
  for (int rep = 0; rep < 50; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const double n = rng.uniform(0.5, 3.0);
    const auto rep_ = euler_alpha(ms, PotentialLaw<double>(n));
    const double ref =
        bisect([&](double x) { return E_direct(x, ms.mass(0), ms.mass(1), ms.mass(2), n); }, 1e-3, 1e3);
    EXPECT_NEAR(rep_.alpha, ref, 1e-12 * ref);
    EXPECT_TRUE(rep_.converged);
    EXPECT_TRUE(rep_.bound.inside);
    EXPECT_TRUE(rep_.bound.inside_envelope);
  }
}

TEST(EulerAlpha, QuinticRearrangementAtNewtonianExponent) {
  const MassSystem<double> ms({1.0, 2.0, 3.0});
  const double a = euler_alpha(ms, kNewton).alpha;
  const double m1 = 1, m2 = 2, m3 = 3;
  // Expanded by hand: (m1+m2) x^5 + (3m1+2m2) x^4 + (3m1+m2) x^3 - (m2+3m3) x^2 - (2m2+3m3) x - (m2+m3) = 0.
  const double quintic = (m1 + m2) * std::pow(a, 5) + (3 * m1 + 2 * m2) * std::pow(a, 4) + (3 * m1 + m2) * std::pow(a, 3) -
                         (m2 + 3 * m3) * a * a - (2 * m2 + 3 * m3) * a - (m2 + m3);
  EXPECT_NEAR(quintic, 0.0, 1e-12);
  EXPECT_NEAR(a * a * (1 + a) * (1 + a) * E_of_x(a, ms, kNewton), 0.0, 1e-12);
}

TEST(EulerAlpha, HeavyFirstBodyIsCaseOne) {
  const MassSystem<double> ms({10.0, 1.0, 1.0});
  const auto rep = euler_alpha(ms, kNewton);
  EXPECT_EQ(rep.bound.case_id, 1);
  const double tau1 = bisect([](double x) { return 1 - 1 / ((1 + x) * (1 + x)) - 0.2 / (x * x); }, 0.1, 10.0);
  EXPECT_NEAR(rep.roots.tau[0], tau1, 1e-12);
  EXPECT_NEAR(tau1, 0.57809, 1e-5);
  EXPECT_NEAR(rep.bound.lo, std::sqrt(0.1), 1e-15);
  EXPECT_GT(rep.alpha, std::sqrt(0.1));
  EXPECT_LT(rep.alpha, tau1);
}

TEST(EulerAlpha, BoundCases) {
  EXPECT_EQ(euler_alpha(kEqual, kNewton).bound.case_id, 2);
  EXPECT_EQ(euler_alpha(MassSystem<double>({1.0, 1.0, 2.0}), kNewton).bound.case_id, 3);
  const auto rep = euler_alpha(MassSystem<double>({1.0, 1.0, 10.0}), kNewton);
  EXPECT_EQ(rep.bound.case_id, 4);
  EXPECT_NEAR(rep.bound.hi, std::sqrt(10.0), 1e-14);
  EXPECT_NEAR(rep.bound.lo, rep.roots.sigma[2], 0.0);
}

TEST(EulerAlpha, ReversedMassesInvertRatio) {
  sampling::Rng rng(65);
  for (int rep = 0; rep < 100; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const MassSystem<double> rev({ms.mass(2), ms.mass(1), ms.mass(0)});
    const double a = euler_alpha(ms, law).alpha;
    EXPECT_NEAR(euler_alpha(rev, law).alpha, 1 / a, 1e-10 / a);
  }
}

TEST(SigmaTau, EqualMassQuartic) {
  // R_k = 2 + 1/(1+x)^2 - 1/x^2 clears to 2x^4 + 4x^3 + 2x^2 - 2x - 1.
  const double sigma = bisect([](double x) { return 2 * x * x * x * x + 4 * x * x * x + 2 * x * x - 2 * x - 1; }, 0.1, 2.0);
  const auto r = sigma_tau_roots(kEqual, kNewton);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(r.sigma[k], sigma, 1e-13);
    EXPECT_NEAR(r.tau[k], 1 / sigma, 1e-12);
  }
}

TEST(SigmaTau, ReciprocalRootsAndLimits) {
  sampling::Rng rng(66);
  for (int rep = 0; rep < 50; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto r = sigma_tau_roots(ms, law);
    ASSERT_TRUE(r.converged);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(r.sigma[k] * r.tau[k], 1.0, 1e-12);
      EXPECT_NEAR(Q_of_x(r.tau[k], k, ms, law), 0.0, 1e-12);
      EXPECT_NEAR(R_of_x(1e8, k, ms, law), mass_ratio(k, ms), 1e-7);
    }
  }
}

TEST(SigmaTau, UnitThreshold) {
  for (double n : {1.0, 2.0}) {
    const PotentialLaw<double> law(n);
    const double c = case_threshold(law);
    const MassSystem<double> ms({1.0, 2.0, c * 3.0});
    EXPECT_NEAR(sigma_tau_roots(ms, law).sigma[2], 1.0, 1e-12);
  }
  EXPECT_NEAR(case_threshold(kNewton), 4.0 / 3.0, 1e-15);
}

TEST(SigmaTau, RatioBoundsHoldInTheProvenDirection) {
  sampling::Rng rng(67);
  int header_direction_failures = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const double n = rng.uniform(0.5, 3.0);
    const auto r = sigma_tau_roots(ms, PotentialLaw<double>(n));
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) {
        if (j == k) continue;
        const double up = std::pow(ms.mass(k) / ms.mass(j), 1 / (n + 1));
        EXPECT_LT(r.sigma[k], up);
        EXPECT_GT(r.tau[k], 1 / up);
        if (!(r.tau[k] < 1 / up)) ++header_direction_failures;
      }
  }
  // The opposite inequality for tau never holds.
  EXPECT_EQ(header_direction_failures, 200 * 6);
}

TEST(SigmaTau, SignsOfEAtBoundingRoots) {
  sampling::Rng rng(68);
  for (int rep = 0; rep < 100; ++rep) {
    const auto ms = sampling::random_masses(rng, 3);
    const PotentialLaw<double> law(rng.uniform(0.5, 3.0));
    const auto r = sigma_tau_roots(ms, law);
    EXPECT_LT(E_of_x(r.sigma[2], ms, law), 0.0);
    EXPECT_GT(E_of_x(r.tau[0], ms, law), 0.0);
  }
}

TEST(EulerInitial, CollinearAndRealizable) {
  const MassSystem<double> ms({1.0, 2.0, 3.0});
  const auto s = euler_initial_conditions(ms, kNewton, 2.0, CollinearMode::kCircular);
  const double a = euler_alpha(ms, kNewton).alpha;
  EXPECT_NEAR(s.pos(1, 2).norm() / s.pos(0, 1).norm(), a, 1e-15);
  EXPECT_LT(max_triangle_residual(s).max_residual, 1e-15);
  EXPECT_EQ(euler_initial_conditions(ms, kNewton, 2.0, CollinearMode::kRest).qdot[0], Vec3d::Zero());
}

TEST(EulerInitial, CircularOrbitKeepsRatio) {
  using ld = long double;
  const MassSystem<ld> ms({2.0L, 3.0L, 1.0L});
  const PotentialLaw<ld> law(1.0L);
  const auto s = euler_initial_conditions<ld>(ms, law, 1.0L, CollinearMode::kCircular);
  const ld a = euler_alpha(ms, law).alpha;
  const ld w = euler_circular_omega<ld>(ms, law, a, 1.0L);
  IntegratorConfig cfg;
  cfg.t_end = static_cast<double>(3 * 2 * pi<ld>() / w);
  cfg.monitor_every = 100;
  const auto traj = integrate(s, ms, law, cfg);
  for (const auto& sample : traj.samples) {
    const ld ratio = sample.state.pos(1, 2).norm() / sample.state.pos(0, 1).norm();
    EXPECT_LT(std::abs(static_cast<double>(ratio / a - 1)), 1e-6);
  }
}
