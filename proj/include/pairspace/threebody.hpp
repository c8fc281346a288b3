#pragma once

#include "pairspace/core.hpp"
#include "pairspace/dynamics.hpp"
#include "pairspace/kinetics.hpp"

#include <array>
#include <vector>

namespace pairspace {

// Three-body specialization. Pairs are taken in the cyclic order
// (1,2), (2,3), (3,1), which is 0-based (0,1), (1,2), (2,0) here.

inline constexpr std::array<std::array<int, 2>, 3> kCyclicPairs{{{0, 1}, {1, 2}, {2, 0}}};

namespace detail {

inline void require_three(int n_bodies) {
  if (n_bodies != 3) throw DimensionError("operation is defined for three bodies only");
}

}  // namespace detail

/// The single multiplier of the three-body problem,
/// phi = n (m1 m2 m3 / M) (q12 / q12^(n+2) + q23 / q23^(n+2) + q31 / q31^(n+2)).
template <typename Scalar>
Vec3<Scalar> phi(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  detail::require_three(s.n_bodies);
  const Scalar floor = detail::collision_floor(s);
  Vec3<Scalar> sum = Vec3<Scalar>::Zero();
  for (const auto& [i, j] : kCyclicPairs) {
    const Vec3<Scalar> q = s.pos(i, j);
    const Scalar dist = q.norm();
    detail::check_separation(dist, floor, i, j);
    sum += law.inverse_power_n2(dist) * q;
  }
  return (law.n() * ms.mass(0) * ms.mass(1) * ms.mass(2) / ms.total()) * sum;
}

template <typename Scalar>
struct PairEnergies {
  std::array<Scalar, 3> e{};  // e_12, e_23, e_31
  Scalar total = Scalar(0);
};

/// e_ij = mu_ij |qdot_ij|^2 / 2 - M mu_ij / q_ij^n.
template <typename Scalar>
PairEnergies<Scalar> pair_energies(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                   const PotentialLaw<Scalar>& law) {
  detail::require_three(s.n_bodies);
  const Scalar floor = detail::collision_floor(s);
  PairEnergies<Scalar> out;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [i, j] = kCyclicPairs[p];
    const Scalar mu = ms.mu(i, j);
    const Scalar dist = s.pos(i, j).norm();
    detail::check_separation(dist, floor, i, j);
    out.e[p] = Scalar(0.5) * mu * s.vel(i, j).squaredNorm() - ms.total() * mu * law.inverse_power_n(dist);
    out.total += out.e[p];
  }
  return out;
}

template <typename Scalar>
struct PairAngularMomentum {
  std::array<Vec3<Scalar>, 3> L;       // L_12, L_23, L_31
  std::array<Vec3<Scalar>, 3> torque;  // dL_ij/dt = q_ij x phi; zero when phi is not available

  Vec3<Scalar> total() const { return L[0] + L[1] + L[2]; }
};

/// L_ij = q_ij x mu_ij qdot_ij. Torques are left at zero.
template <typename Scalar>
PairAngularMomentum<Scalar> pair_angular_momenta(const PairState<Scalar>& s, const MassSystem<Scalar>& ms) {
  detail::require_three(s.n_bodies);
  PairAngularMomentum<Scalar> out;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [i, j] = kCyclicPairs[p];
    out.L[p] = s.pos(i, j).cross(ms.mu(i, j) * s.vel(i, j));
    out.torque[p].setZero();
  }
  return out;
}

/// Angular momenta together with the torques q_ij x phi.
template <typename Scalar>
PairAngularMomentum<Scalar> pair_angular_momenta(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                                 const PotentialLaw<Scalar>& law) {
  auto out = pair_angular_momenta(s, ms);
  const Vec3<Scalar> f = phi(s, ms, law);
  for (std::size_t p = 0; p < 3; ++p) {
    const auto [i, j] = kCyclicPairs[p];
    out.torque[p] = s.pos(i, j).cross(f);
  }
  return out;
}

/// Right side of q12 x phi = n m3 mu12 (1/q23^(n+2) - 1/q31^(n+2)) (q12 x q23),
/// obtained by eliminating q31 with the triangle condition.
template <typename Scalar>
Vec3<Scalar> torque12_closed_form(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                  const PotentialLaw<Scalar>& law) {
  detail::require_three(s.n_bodies);
  const Vec3<Scalar> q12 = s.pos(0, 1);
  const Vec3<Scalar> q23 = s.pos(1, 2);
  const Vec3<Scalar> q31 = s.pos(2, 0);
  const Scalar coeff = law.n() * ms.mass(2) * ms.mu(0, 1) *
                       (law.inverse_power_n2(q23.norm()) - law.inverse_power_n2(q31.norm()));
  return coeff * q12.cross(q23);
}

enum class ConservationClass { kAllConserved, kOneConserved, kNoneConserved };

inline const char* to_string(ConservationClass c) {
  switch (c) {
    case ConservationClass::kAllConserved: return "all_conserved";
    case ConservationClass::kOneConserved: return "one_conserved";
    case ConservationClass::kNoneConserved: return "none_conserved";
  }
  return "unknown";
}

template <typename Scalar>
struct ConservationVerdict {
  ConservationClass verdict = ConservationClass::kNoneConserved;
  std::array<Scalar, 3> drift{};  // max |L_ij(t) - L_ij(0)| / scale, pairs (1,2), (2,3), (3,1)
};

/// Classifies individual pair angular momentum conservation along a trajectory.
///
/// Drift of each L_ij is measured against the largest |L_ij(0)| (or the
/// largest |L_ij| seen, if all start at zero). Two conserved pairs imply the
/// third through conservation of the sum, so that case reports all_conserved.
template <typename Scalar>
ConservationVerdict<Scalar> conservation_classifier(const std::vector<TrajectorySample<Scalar>>& traj,
                                                    const MassSystem<Scalar>& ms, double threshold = 1e-5) {
  if (traj.size() < 10) throw DomainError("conservation_classifier needs at least 10 samples");
  detail::require_three(traj.front().state.n_bodies);
  std::vector<PairAngularMomentum<Scalar>> series;
  series.reserve(traj.size());
  for (const auto& sample : traj) series.push_back(pair_angular_momenta(sample.state, ms));

  Scalar scale(0);
  for (const auto& l : series.front().L) scale = std::max(scale, l.norm());
  if (scale == Scalar(0))
    for (const auto& am : series)
      for (const auto& l : am.L) scale = std::max(scale, l.norm());

  ConservationVerdict<Scalar> out;
  int conserved = 0;
  for (std::size_t p = 0; p < 3; ++p) {
    Scalar worst(0);
    for (const auto& am : series) worst = std::max(worst, (am.L[p] - series.front().L[p]).norm());
    out.drift[p] = scale > Scalar(0) ? worst / scale : Scalar(0);
    if (out.drift[p] <= Scalar(threshold)) ++conserved;
  }
  out.verdict = conserved >= 2   ? ConservationClass::kAllConserved
                : conserved == 1 ? ConservationClass::kOneConserved
                                 : ConservationClass::kNoneConserved;
  return out;
}

template <typename Scalar>
struct HomothetyResult {
  bool is_homothetic = false;
  std::vector<Scalar> lambda_series;
  std::vector<Scalar> residual_series;  // max component residual / largest pair distance
  Scalar max_residual = Scalar(0);
};

/// Fits q_ij(t) = lambda(t) q_ij(0) by scalar least squares over all pair
/// components at every sample. Homothetic iff every residual is at most
/// tol times the sample's largest pair distance.
template <typename Scalar>
HomothetyResult<Scalar> homothety_check(const std::vector<TrajectorySample<Scalar>>& traj, double tol) {
  if (traj.empty()) throw DomainError("homothety_check needs a non-empty trajectory");
  const auto& q0 = traj.front().state.q;
  Scalar norm0(0);
  for (const auto& v : q0) {
    if (v.norm() == Scalar(0)) throw DomainError("homothety_check needs nonzero initial pair vectors");
    norm0 += v.squaredNorm();
  }
  HomothetyResult<Scalar> out;
  for (const auto& sample : traj) {
    const auto& q = sample.state.q;
    Scalar dot(0);
    for (std::size_t k = 0; k < q.size(); ++k) dot += q[k].dot(q0[k]);
    const Scalar lambda = dot / norm0;
    Scalar worst(0);
    for (std::size_t k = 0; k < q.size(); ++k) worst = std::max(worst, (q[k] - lambda * q0[k]).cwiseAbs().maxCoeff());
    const Scalar rel = worst / length_scale(sample.state);
    out.lambda_series.push_back(lambda);
    out.residual_series.push_back(rel);
    out.max_residual = std::max(out.max_residual, rel);
  }
  out.is_homothetic = out.max_residual <= Scalar(tol);
  return out;
}

}  // namespace pairspace
