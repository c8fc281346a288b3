#pragma once

#include "pairspace/core.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace pairspace {

/// Separations below this fraction of the largest pair distance are collisions.
inline constexpr double kCollisionTolerance = 1e-12;

/// Pairwise potential v_ij(q) = -m_i m_j / |q|^n with G = 1.
template <typename Scalar>
class PotentialLaw {
 public:
  PotentialLaw() = default;
  explicit PotentialLaw(Scalar n) : n_(n) {
    if (!(n > Scalar(0)) || !std::isfinite(static_cast<double>(n))) {
      throw DomainError("potential exponent n must be positive");
    }
  }

  Scalar n() const { return n_; }

  /// |q|^(-(n + 2)), with exact integer paths for n = 1, 2, 3.
  Scalar inverse_power_n2(Scalar dist) const { return inverse_power(dist, n_ + Scalar(2)); }

  /// |q|^(-n).
  Scalar inverse_power_n(Scalar dist) const { return inverse_power(dist, n_); }

 private:
  static Scalar inverse_power(Scalar dist, Scalar p) {
    using std::pow;
    if (p == Scalar(3)) return Scalar(1) / (dist * dist * dist);
    if (p == Scalar(4)) {
      const Scalar d2 = dist * dist;
      return Scalar(1) / (d2 * d2);
    }
    if (p == Scalar(5)) {
      const Scalar d2 = dist * dist;
      return Scalar(1) / (d2 * d2 * dist);
    }
    if (p == Scalar(1)) return Scalar(1) / dist;
    if (p == Scalar(2)) return Scalar(1) / (dist * dist);
    return pow(dist, -p);
  }

  Scalar n_ = Scalar(1);
};

using PotentialLawd = PotentialLaw<double>;

namespace detail {

inline std::string pair_label(int i, int j) {
  return "(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
}

template <typename Scalar>
void check_separation(Scalar dist, Scalar floor, int i, int j) {
  if (!(dist > floor)) {
    throw CollisionError("collision singularity between bodies " + pair_label(i, j) +
                             ": separation " + std::to_string(static_cast<double>(dist)),
                         i, j, static_cast<double>(dist));
  }
}

template <typename Scalar>
Scalar collision_floor(const PairState<Scalar>& s) {
  return Scalar(kCollisionTolerance) * length_scale(s);
}

}  // namespace detail

/// dv_ij/dq_ij = n m_i m_j q / |q|^(n+2).
///
/// `floor` is the absolute separation at or below which a CollisionError is raised.
template <typename Scalar>
Vec3<Scalar> pair_force_gradient(const Vec3<Scalar>& q, int i, int j, const MassSystem<Scalar>& ms,
                                 const PotentialLaw<Scalar>& law, Scalar floor = Scalar(0)) {
  const Scalar dist = q.norm();
  detail::check_separation(dist, floor, i, j);
  return (law.n() * ms.mass(i) * ms.mass(j) * law.inverse_power_n2(dist)) * q;
}

/// Table of (1/mu_ij) dv_ij/dq_ij = n M q_ij / |q_ij|^(n+2) for every stored pair.
template <typename Scalar>
class ReducedGradients {
 public:
  ReducedGradients(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law)
      : n_bodies_(s.n_bodies), values_(s.q.size()) {
    if (s.n_bodies != ms.size()) throw DimensionError("pair state and mass system disagree on N");
    const Scalar floor = detail::collision_floor(s);
    const Scalar coeff = law.n() * ms.total();
    for (std::size_t slot = 0; slot < s.q.size(); ++slot) {
      const Scalar dist = s.q[slot].norm();
      if (!(dist > floor)) {
        const auto [i, j] = pair_of_slot(static_cast<int>(slot), n_bodies_);
        detail::check_separation(dist, floor, i, j);
      }
      values_[slot] = (coeff * law.inverse_power_n2(dist)) * s.q[slot];
    }
  }

  /// Oriented value; (j, i) returns the negation of (i, j).
  Vec3<Scalar> operator()(int i, int j) const {
    const auto p = PairIndex::of(i, j, n_bodies_);
    return Scalar(p.sign) * values_[static_cast<std::size_t>(p.slot)];
  }

  /// F_ijk = a_ij + a_jk + a_ki.
  Vec3<Scalar> triplet(int i, int j, int k) const { return (*this)(i, j) + (*this)(j, k) + (*this)(k, i); }

 private:
  int n_bodies_;
  std::vector<Vec3<Scalar>> values_;
};

/// Triplet force combination F_ijk; antisymmetric under any index swap.
template <typename Scalar>
struct TripletForce {
  Vec3<Scalar> value;
  int i = 0, j = 0, k = 0;
};

template <typename Scalar>
TripletForce<Scalar> triplet_force(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                   const PotentialLaw<Scalar>& law, int i, int j, int k) {
  if (i == j || j == k || i == k) throw DimensionError("triplet_force needs three distinct indices");
  const Scalar floor = detail::collision_floor(s);
  const Scalar coeff = law.n() * ms.total();
  auto reduced = [&](int a, int b) {
    const Vec3<Scalar> q = s.pos(a, b);
    const Scalar dist = q.norm();
    detail::check_separation(dist, floor, a, b);
    return Vec3<Scalar>((coeff * law.inverse_power_n2(dist)) * q);
  };
  return {reduced(i, j) + reduced(j, k) + reduced(k, i), i, j, k};
}

/// J_ij = mu_ij sum_{k != i,j} (m_k / M) F_ijk, from a precomputed gradient table.
template <typename Scalar>
Vec3<Scalar> multiplier_sum_J(const ReducedGradients<Scalar>& a, const MassSystem<Scalar>& ms, int i, int j) {
  Vec3<Scalar> sum = Vec3<Scalar>::Zero();
  for (int k = 0; k < ms.size(); ++k) {
    if (k == i || k == j) continue;
    sum += ms.mass(k) * a.triplet(i, j, k);
  }
  return (ms.mu(i, j) / ms.total()) * sum;
}

template <typename Scalar>
Vec3<Scalar> multiplier_sum_J(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                              const PotentialLaw<Scalar>& law, int i, int j) {
  if (i == j) throw DimensionError("multiplier_sum_J needs i != j");
  return multiplier_sum_J(ReducedGradients<Scalar>(s, ms, law), ms, i, j);
}

/// T = M Rdot^2 / 2 + sum_[ij] mu_ij qdot_ij^2 / 2 - sum_[ijk] mu_ijk (qdot_ij + qdot_jk + qdot_ki)^2 / 2.
template <typename Scalar>
Scalar kinetic_energy(const PairState<Scalar>& s, const MassSystem<Scalar>& ms) {
  if (s.n_bodies != ms.size()) throw DimensionError("pair state and mass system disagree on N");
  const int n = ms.size();
  Scalar pair_term(0);
  Scalar triplet_term(0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      pair_term += ms.mu(i, j) * s.vel(i, j).squaredNorm();
      for (int k = j + 1; k < n; ++k)
        triplet_term += ms.mu(i, j, k) * velocity_triangle_residual(s, i, j, k).squaredNorm();
    }
  return Scalar(0.5) * (ms.total() * s.Rdot.squaredNorm() + pair_term - triplet_term);
}

/// V = -sum_[ij] m_i m_j / q_ij^n.
template <typename Scalar>
Scalar potential_energy(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  const Scalar floor = detail::collision_floor(s);
  Scalar v(0);
  for (std::size_t slot = 0; slot < s.q.size(); ++slot) {
    const auto [i, j] = pair_of_slot(static_cast<int>(slot), s.n_bodies);
    const Scalar dist = s.q[slot].norm();
    detail::check_separation(dist, floor, i, j);
    v -= ms.mass(i) * ms.mass(j) * law.inverse_power_n(dist);
  }
  return v;
}

/// Energy in the center-of-mass frame: T - M Rdot^2 / 2 + V.
template <typename Scalar>
Scalar internal_energy(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  return kinetic_energy(s, ms) - Scalar(0.5) * ms.total() * s.Rdot.squaredNorm() + potential_energy(s, ms, law);
}

}  // namespace pairspace
