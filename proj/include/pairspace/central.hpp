#pragma once

// Equilateral (Lagrange) and collinear (Euler) central configurations of the
// three-body problem with the r^-n potential.
//
// Collinear conventions: bodies 1, 2, 3 lie in that order along the line,
// q23 = alpha q12 and q31 = -(1 + alpha) q12. Masses are taken as given; no
// relabeling happens, and the bound case reflects which end mass is larger.

#include "pairspace/core.hpp"
#include "pairspace/dynamics.hpp"
#include "pairspace/kinetics.hpp"
#include "pairspace/roots.hpp"
#include "pairspace/threebody.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace pairspace {

// ---------------------------------------------------------------------------
// Equilateral configuration

/// Rotation by 2 pi / 3 in the xy-plane.
template <typename Scalar>
Mat3<Scalar> rotation_third() {
  using std::sqrt;
  const Scalar h = sqrt(Scalar(3)) / Scalar(2);
  Mat3<Scalar> r;
  r << Scalar(-0.5), -h, Scalar(0),  //
      h, Scalar(-0.5), Scalar(0),    //
      Scalar(0), Scalar(0), Scalar(1);
  return r;
}

/// One sample of the (1,2) pair motion.
template <typename Scalar>
struct Pair12Sample {
  Scalar time = Scalar(0);
  Vec3<Scalar> q = Vec3<Scalar>::Zero();
  Vec3<Scalar> qdot = Vec3<Scalar>::Zero();
};

/// Angular rate of a circular solution of q'' + n M q / q^(n+2) = 0: omega^2 = n M / q^(n+1).
template <typename Scalar>
Scalar lagrange_circular_omega(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law, Scalar q) {
  using std::pow;
  using std::sqrt;
  return sqrt(law.n() * ms.total() / pow(q, law.n() + Scalar(1)));
}

/// Analytic circular (1,2) pair motion in the xy-plane, counter-clockwise,
/// starting on the +x axis.
template <typename Scalar>
Pair12Sample<Scalar> lagrange_circular_pair12(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law,
                                              Scalar q, Scalar t) {
  using std::cos;
  using std::sin;
  const Scalar w = lagrange_circular_omega(ms, law, q);
  const Scalar c = cos(w * t);
  const Scalar s = sin(w * t);
  return {t, Vec3<Scalar>(q * c, q * s, Scalar(0)), Vec3<Scalar>(-q * w * s, q * w * c, Scalar(0))};
}

/// Numerical (1,2) pair motion from arbitrary xy-plane initial data, obtained
/// by integrating a two-body pair-space system of the same total mass.
template <typename Scalar>
std::vector<Pair12Sample<Scalar>> solve_pair12(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law,
                                               const Vec3<Scalar>& q0, const Vec3<Scalar>& qdot0,
                                               const IntegratorConfig& cfg) {
  const Scalar half = ms.total() / Scalar(2);
  const MassSystem<Scalar> pair_system({half, half});
  PairState<Scalar> s(2);
  s.q[0] = q0;
  s.qdot[0] = qdot0;
  const auto traj = integrate(s, pair_system, law, cfg);
  if (traj.status == RunStatus::kCollision) throw CollisionError(traj.message, 0, 1, 0.0);
  std::vector<Pair12Sample<Scalar>> out;
  out.reserve(traj.samples.size());
  for (const auto& sample : traj.samples) out.push_back({sample.time, sample.state.q[0], sample.state.qdot[0]});
  return out;
}

/// Builds the equilateral three-body motion q23 = N q12, q31 = N^2 q12 from a
/// solution of the (1,2) pair equation lying in the xy-plane.
template <typename Scalar>
std::vector<PairState<Scalar>> lagrange_construct(const std::vector<Pair12Sample<Scalar>>& pair12,
                                                  double planar_tol = 1e-12) {
  using std::abs;
  const Mat3<Scalar> rot = rotation_third<Scalar>();
  const Mat3<Scalar> rot2 = rot * rot;
  std::vector<PairState<Scalar>> out;
  out.reserve(pair12.size());
  for (const auto& p : pair12) {
    const Scalar scale = std::max(p.q.norm(), Scalar(1e-300));
    const Scalar vscale = std::max(p.qdot.norm(), Scalar(1e-300));
    if (abs(p.q.z()) > Scalar(planar_tol) * scale || abs(p.qdot.z()) > Scalar(planar_tol) * vscale) {
      throw DomainError("pair (1,2) solution is not confined to the xy-plane");
    }
    PairState<Scalar> s(3);
    s.time = p.time;
    s.set_pos(0, 1, p.q);
    s.set_pos(1, 2, rot * p.q);
    s.set_pos(2, 0, rot2 * p.q);
    s.set_vel(0, 1, p.qdot);
    s.set_vel(1, 2, rot * p.qdot);
    s.set_vel(2, 0, rot2 * p.qdot);
    out.push_back(std::move(s));
  }
  return out;
}

/// Initial pair state of the circular equilateral orbit with side q.
template <typename Scalar>
PairState<Scalar> lagrange_circular_initial(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law,
                                            Scalar q) {
  if (ms.size() != 3) throw DimensionError("equilateral configuration needs three bodies");
  if (!(q > Scalar(0))) throw DomainError("side length must be positive");
  return lagrange_construct<Scalar>({lagrange_circular_pair12(ms, law, q, Scalar(0))}).front();
}

/// Equilateral configuration at rest (homothetic collapse data).
template <typename Scalar>
PairState<Scalar> lagrange_rest_initial(Scalar q) {
  if (!(q > Scalar(0))) throw DomainError("side length must be positive");
  return lagrange_construct<Scalar>({Pair12Sample<Scalar>{Scalar(0), Vec3<Scalar>(q, Scalar(0), Scalar(0)),
                                                          Vec3<Scalar>::Zero()}})
      .front();
}

// ---------------------------------------------------------------------------
// Collinear configuration: scalar functions

namespace detail {

template <typename Scalar>
void require_positive(Scalar x) {
  if (!(x > Scalar(0))) throw DomainError("argument must be positive, got " + std::to_string(static_cast<double>(x)));
}

template <typename Scalar>
void require_collinear_masses(const MassSystem<Scalar>& ms) {
  if (ms.size() != 3) throw DimensionError("collinear analysis needs exactly three masses");
}

template <typename Scalar>
Scalar ipow(Scalar x, Scalar p) {
  using std::pow;
  return pow(x, -p);
}

}  // namespace detail

/// E(x) = M (x - 1/x^(n+1)) + (m1 - m3 x) [1 + 1/x^(n+1) - 1/(1+x)^(n+1)].
/// Its unique positive root is alpha.
template <typename Scalar>
Scalar E_of_x(Scalar x, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_positive(x);
  detail::require_collinear_masses(ms);
  const Scalar p = law.n() + Scalar(1);
  const Scalar ax = detail::ipow(x, p);
  const Scalar a1x = detail::ipow(Scalar(1) + x, p);
  return ms.total() * (x - ax) + (ms.mass(0) - ms.mass(2) * x) * (Scalar(1) + ax - a1x);
}

/// The expanded form
/// E(x) = (M - m3) x + m1 - m3/x^n - (M - m1)/x^(n+1) - (m1 - m3 x)/(1+x)^(n+1).
template <typename Scalar>
Scalar E_of_x_expanded(Scalar x, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_positive(x);
  detail::require_collinear_masses(ms);
  const Scalar n = law.n();
  const Scalar M = ms.total();
  const Scalar m1 = ms.mass(0);
  const Scalar m3 = ms.mass(2);
  return (M - m3) * x + m1 - m3 * detail::ipow(x, n) - (M - m1) * detail::ipow(x, n + Scalar(1)) -
         (m1 - m3 * x) * detail::ipow(Scalar(1) + x, n + Scalar(1));
}

/// Sum of the magnitudes of the terms of E(x); the rounding scale of E.
template <typename Scalar>
Scalar E_scale(Scalar x, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  using std::abs;
  const Scalar p = law.n() + Scalar(1);
  const Scalar ax = detail::ipow(x, p);
  const Scalar a1x = detail::ipow(Scalar(1) + x, p);
  return ms.total() * (x + ax) + abs(ms.mass(0) - ms.mass(2) * x) * (Scalar(1) + ax + a1x) +
         ms.mass(2) * x * (Scalar(1) + ax + a1x);
}

/// dE/dx = (M - m3) + (n+1)(M - m1)/x^(n+2) + (n+1)(m1 + m3)/(1+x)^(n+2)
///         + n m3 [1/x^(n+1) - 1/(1+x)^(n+1)], every term positive.
template <typename Scalar>
Scalar E_derivative(Scalar x, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_positive(x);
  detail::require_collinear_masses(ms);
  const Scalar n = law.n();
  const Scalar M = ms.total();
  const Scalar m1 = ms.mass(0);
  const Scalar m3 = ms.mass(2);
  return (M - m3) + (n + Scalar(1)) * (M - m1) * detail::ipow(x, n + Scalar(2)) +
         (n + Scalar(1)) * (m1 + m3) * detail::ipow(Scalar(1) + x, n + Scalar(2)) +
         n * m3 * (detail::ipow(x, n + Scalar(1)) - detail::ipow(Scalar(1) + x, n + Scalar(1)));
}

/// x_L = (m3 / m1)^(1/(n+1)).
template <typename Scalar>
Scalar x_L(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  using std::pow;
  detail::require_collinear_masses(ms);
  return pow(ms.mass(2) / ms.mass(0), Scalar(1) / (law.n() + Scalar(1)));
}

/// E(x_L) = ((x_L^(n+2) - 1) / x_L^(n+1)) [m2 + m3 / (1 + x_L)^(n+1)].
template <typename Scalar>
Scalar E_at_x_L(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  using std::pow;
  const Scalar xl = x_L(ms, law);
  const Scalar p = law.n() + Scalar(1);
  return (pow(xl, p + Scalar(1)) - Scalar(1)) / pow(xl, p) *
         (ms.mass(1) + ms.mass(2) * detail::ipow(Scalar(1) + xl, p));
}

/// Mass ratio (m_i + m_j) / m_k for k in {0, 1, 2}.
template <typename Scalar>
Scalar mass_ratio(int k, const MassSystem<Scalar>& ms) {
  detail::require_collinear_masses(ms);
  if (k < 0 || k > 2) throw DimensionError("k must be 0, 1 or 2");
  return (ms.total() - ms.mass(k)) / ms.mass(k);
}

/// R_k(x) = (m_i + m_j)/m_k + 1/(1+x)^(n+1) - 1/x^(n+1). k is 0-based.
template <typename Scalar>
Scalar R_of_x(Scalar x, int k, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_positive(x);
  const Scalar p = law.n() + Scalar(1);
  return mass_ratio(k, ms) + detail::ipow(Scalar(1) + x, p) - detail::ipow(x, p);
}

/// Q_k(x) = 1 - 1/(1+x)^(n+1) - ((m_i + m_j)/m_k) / x^(n+1). k is 0-based.
template <typename Scalar>
Scalar Q_of_x(Scalar x, int k, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_positive(x);
  const Scalar p = law.n() + Scalar(1);
  return Scalar(1) - detail::ipow(Scalar(1) + x, p) - mass_ratio(k, ms) * detail::ipow(x, p);
}

template <typename Scalar>
Scalar R_derivative(Scalar x, int /*k*/, const PotentialLaw<Scalar>& law) {
  const Scalar p = law.n() + Scalar(1);
  return p * (detail::ipow(x, p + Scalar(1)) - detail::ipow(Scalar(1) + x, p + Scalar(1)));
}

template <typename Scalar>
Scalar Q_derivative(Scalar x, int k, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  const Scalar p = law.n() + Scalar(1);
  return p * (detail::ipow(Scalar(1) + x, p + Scalar(1)) + mass_ratio(k, ms) * detail::ipow(x, p + Scalar(1)));
}

template <typename Scalar>
struct SigmaTau {
  std::array<Scalar, 3> sigma{};  // roots of R_1, R_2, R_3
  std::array<Scalar, 3> tau{};    // roots of Q_1, Q_2, Q_3
  bool converged = true;
};

/// Unique positive roots sigma_k of R_k and tau_k of Q_k.
template <typename Scalar>
SigmaTau<Scalar> sigma_tau_roots(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  using std::abs;
  detail::require_collinear_masses(ms);
  const Scalar p = law.n() + Scalar(1);
  SigmaTau<Scalar> out;
  for (int k = 0; k < 3; ++k) {
    const Scalar c = mass_ratio(k, ms);
    const auto r = increasing_root<Scalar>(
        [&](Scalar x) { return R_of_x(x, k, ms, law); }, [&](Scalar x) { return R_derivative(x, k, law); },
        [&](Scalar x) { return c + detail::ipow(Scalar(1) + x, p) + detail::ipow(x, p); });
    const auto q = increasing_root<Scalar>(
        [&](Scalar x) { return Q_of_x(x, k, ms, law); }, [&](Scalar x) { return Q_derivative(x, k, ms, law); },
        [&](Scalar x) { return Scalar(1) + detail::ipow(Scalar(1) + x, p) + c * detail::ipow(x, p); });
    out.sigma[static_cast<std::size_t>(k)] = r.root;
    out.tau[static_cast<std::size_t>(k)] = q.root;
    out.converged = out.converged && r.converged && q.converged;
  }
  return out;
}

/// Threshold factor 2^(n+1) / (2^(n+1) - 1) separating the bound cases.
template <typename Scalar>
Scalar case_threshold(const PotentialLaw<Scalar>& law) {
  using std::pow;
  const Scalar t = pow(Scalar(2), law.n() + Scalar(1));
  return t / (t - Scalar(1));
}

template <typename Scalar>
struct BoundCase {
  int case_id = 0;  // 1..4
  Scalar lo = Scalar(0);
  Scalar hi = Scalar(0);
  bool inside = false;           // alpha in [lo, hi]
  bool inside_envelope = false;  // alpha between x_L and 1
};

template <typename Scalar>
struct CollinearReport {
  std::array<Scalar, 3> masses{};
  Scalar n = Scalar(1);
  Scalar alpha = Scalar(0);
  Scalar residual = Scalar(0);  // E(alpha)
  Scalar residual_scale = Scalar(0);
  Scalar bracket_lo = Scalar(0);
  Scalar bracket_hi = Scalar(0);
  Scalar x_L = Scalar(0);
  SigmaTau<Scalar> roots;
  BoundCase<Scalar> bound;
  bool converged = false;
};

/// Classifies the masses into the four bound cases and checks alpha against
/// the case interval and the envelope between x_L and 1. Endpoint checks
/// allow a relative slack of `slack`.
template <typename Scalar>
BoundCase<Scalar> bound_classify(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law,
                                 const CollinearReport<Scalar>& report, double slack = 1e-12) {
  detail::require_collinear_masses(ms);
  const Scalar m1 = ms.mass(0);
  const Scalar m2 = ms.mass(1);
  const Scalar m3 = ms.mass(2);
  const Scalar c = case_threshold(law);
  const Scalar xl = x_L(ms, law);
  BoundCase<Scalar> out;
  if (m1 >= m3) {
    if (m1 > c * (m3 + m2)) out = {1, xl, report.roots.tau[0]};
    else out = {2, xl, Scalar(1)};
  } else {
    if (m3 > c * (m1 + m2)) out = {4, report.roots.sigma[2], xl};
    else out = {3, Scalar(1), xl};
  }
  if (out.case_id == 0) throw Error("bound classification failed");
  const Scalar a = report.alpha;
  const Scalar s = Scalar(slack);
  out.inside = a >= out.lo * (Scalar(1) - s) && a <= out.hi * (Scalar(1) + s);
  const Scalar env_lo = std::min(xl, Scalar(1));
  const Scalar env_hi = std::max(xl, Scalar(1));
  out.inside_envelope = a >= env_lo * (Scalar(1) - s) && a <= env_hi * (Scalar(1) + s);
  return out;
}

/// Root alpha of E with its bounds, sigma/tau values and bound case.
template <typename Scalar>
CollinearReport<Scalar> euler_alpha(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_collinear_masses(ms);
  CollinearReport<Scalar> rep;
  rep.masses = {ms.mass(0), ms.mass(1), ms.mass(2)};
  rep.n = law.n();
  const auto root = increasing_root<Scalar>([&](Scalar x) { return E_of_x(x, ms, law); },
                                            [&](Scalar x) { return E_derivative(x, ms, law); },
                                            [&](Scalar x) { return E_scale(x, ms, law); });
  rep.alpha = root.root;
  rep.residual = root.residual;
  rep.residual_scale = root.scale;
  rep.bracket_lo = root.bracket_lo;
  rep.bracket_hi = root.bracket_hi;
  rep.converged = root.converged;
  rep.x_L = x_L(ms, law);
  rep.roots = sigma_tau_roots(ms, law);
  rep.bound = bound_classify(ms, law, rep);
  return rep;
}

/// Scalar coefficient of phi along q12 / q12^(n+2) in a collinear configuration:
/// n (m1 m2 m3 / M) [1 + 1/alpha^(n+1) - 1/(1+alpha)^(n+1)].
template <typename Scalar>
Scalar collinear_phi_coefficient(Scalar alpha, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  const Scalar p = law.n() + Scalar(1);
  return law.n() * ms.mass(0) * ms.mass(1) * ms.mass(2) / ms.total() *
         (Scalar(1) + detail::ipow(alpha, p) - detail::ipow(Scalar(1) + alpha, p));
}

enum class CollinearMode { kRest, kCircular };

/// Angular rate of the rigidly rotating collinear solution with |q12| = d:
/// omega^2 = n M / d^(n+1) - phi_s / (mu_12 d^(n+1)).
template <typename Scalar>
Scalar euler_circular_omega(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law, Scalar alpha, Scalar d) {
  using std::pow;
  using std::sqrt;
  const Scalar dp = pow(d, law.n() + Scalar(1));
  const Scalar omega2 =
      law.n() * ms.total() / dp - collinear_phi_coefficient(alpha, ms, law) / (ms.mu(0, 1) * dp);
  if (!(omega2 > Scalar(0))) throw Error("collinear configuration admits no rigid rotation");
  return sqrt(omega2);
}

/// Collinear pair state on the x-axis with q12 = (-d, 0, 0), q23 = alpha q12,
/// q31 = -(1 + alpha) q12. Circular mode rotates rigidly about +z.
template <typename Scalar>
PairState<Scalar> euler_initial_conditions(const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law,
                                           Scalar q12_magnitude, CollinearMode mode) {
  detail::require_collinear_masses(ms);
  detail::require_positive(q12_magnitude);
  const Scalar alpha = euler_alpha(ms, law).alpha;
  const Vec3<Scalar> q12(-q12_magnitude, Scalar(0), Scalar(0));
  PairState<Scalar> s(3);
  s.set_pos(0, 1, q12);
  s.set_pos(1, 2, alpha * q12);
  s.set_pos(2, 0, -(Scalar(1) + alpha) * q12);
  if (mode == CollinearMode::kCircular) {
    const Scalar w = euler_circular_omega(ms, law, alpha, q12_magnitude);
    const Vec3<Scalar> axis(Scalar(0), Scalar(0), w);
    for (int i = 0; i < 3; ++i) {
      const int j = (i + 1) % 3;
      s.set_vel(i, j, axis.cross(s.pos(i, j)));
    }
  }
  return s;
}

}  // namespace pairspace
