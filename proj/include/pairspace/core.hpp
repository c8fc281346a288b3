#pragma once

#include "pairspace/types.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace pairspace {

/// Default relative tolerance for the triangle conditions, multiplied by the
/// largest pair distance of the state.
inline constexpr double kTriangleTolerance = 1e-9;

/// Body masses with the cached total mass and reduced masses.
///
/// mu(i, j) = m_i m_j / M and mu(i, j, k) = m_i m_j m_k / M^2. Both are
/// symmetric in their indices, so they are computed on access.
template <typename Scalar>
class MassSystem {
 public:
  MassSystem() = default;

  explicit MassSystem(std::vector<Scalar> masses) : masses_(std::move(masses)) {
    if (masses_.size() < 2) {
      throw DimensionError("MassSystem needs at least two bodies");
    }
    total_ = Scalar(0);
    for (const Scalar& m : masses_) {
      if (!(m > Scalar(0)) || !std::isfinite(static_cast<double>(m))) {
        throw DomainError("masses must be positive and finite");
      }
      total_ += m;
    }
  }

  MassSystem(std::initializer_list<Scalar> masses) : MassSystem(std::vector<Scalar>(masses)) {}

  int size() const { return static_cast<int>(masses_.size()); }
  Scalar mass(int i) const { return masses_[static_cast<std::size_t>(i)]; }
  std::span<const Scalar> masses() const { return masses_; }
  Scalar total() const { return total_; }

  Scalar mu(int i, int j) const { return mass(i) * mass(j) / total_; }
  Scalar mu(int i, int j, int k) const {
    return mass(i) * mass(j) * mass(k) / (total_ * total_);
  }

 private:
  std::vector<Scalar> masses_;
  Scalar total_ = Scalar(0);
};

using MassSystemd = MassSystem<double>;

/// Number of independent pair vectors for N bodies.
constexpr int pair_count(int n_bodies) { return n_bodies * (n_bodies - 1) / 2; }

/// Oriented reference to a stored pair vector.
///
/// Only i < j is stored; q_ji resolves to the same slot with sign -1.
struct PairIndex {
  int slot = 0;
  int sign = 1;

  static PairIndex of(int i, int j, int n_bodies) {
    if (i == j || i < 0 || j < 0 || i >= n_bodies || j >= n_bodies) {
      throw DimensionError("invalid pair index (" + std::to_string(i) + ", " +
                           std::to_string(j) + ")");
    }
    const int lo = std::min(i, j);
    const int hi = std::max(i, j);
    return {lo * (2 * n_bodies - lo - 1) / 2 + (hi - lo - 1), i < j ? 1 : -1};
  }
};

/// Canonical (i, j), i < j, for a storage slot.
inline std::pair<int, int> pair_of_slot(int slot, int n_bodies) {
  int i = 0;
  int row = n_bodies - 1;
  while (slot >= row) {
    slot -= row;
    ++i;
    --row;
  }
  return {i, i + 1 + slot};
}

/// Center of mass and all pair vectors q_ij = r_i - r_j (i < j), plus rates.
template <typename Scalar>
struct PairState {
  using Vec = Vec3<Scalar>;

  int n_bodies = 0;
  Scalar time = Scalar(0);
  Vec R = Vec::Zero();
  Vec Rdot = Vec::Zero();
  std::vector<Vec> q;
  std::vector<Vec> qdot;

  PairState() = default;
  explicit PairState(int n)
      : n_bodies(n),
        q(static_cast<std::size_t>(pair_count(n)), Vec::Zero()),
        qdot(static_cast<std::size_t>(pair_count(n)), Vec::Zero()) {
    if (n < 2) throw DimensionError("PairState needs at least two bodies");
  }

  /// q_ij with q_ji = -q_ij and q_ii = 0.
  Vec pos(int i, int j) const {
    if (i == j) return Vec::Zero();
    const auto p = PairIndex::of(i, j, n_bodies);
    return Scalar(p.sign) * q[static_cast<std::size_t>(p.slot)];
  }
  Vec vel(int i, int j) const {
    if (i == j) return Vec::Zero();
    const auto p = PairIndex::of(i, j, n_bodies);
    return Scalar(p.sign) * qdot[static_cast<std::size_t>(p.slot)];
  }

  /// Assigns q_ij; reversed indices store the negated vector.
  void set_pos(int i, int j, const Vec& v) {
    const auto p = PairIndex::of(i, j, n_bodies);
    q[static_cast<std::size_t>(p.slot)] = Scalar(p.sign) * v;
  }
  void set_vel(int i, int j, const Vec& v) {
    const auto p = PairIndex::of(i, j, n_bodies);
    qdot[static_cast<std::size_t>(p.slot)] = Scalar(p.sign) * v;
  }
};

using PairStated = PairState<double>;

/// Positions and velocities of the bodies in ordinary space.
template <typename Scalar>
struct BodyState {
  using Vec = Vec3<Scalar>;

  Scalar time = Scalar(0);
  std::vector<Vec> r;
  std::vector<Vec> rdot;

  BodyState() = default;
  explicit BodyState(int n)
      : r(static_cast<std::size_t>(n), Vec::Zero()), rdot(static_cast<std::size_t>(n), Vec::Zero()) {}

  int size() const { return static_cast<int>(r.size()); }
};

using BodyStated = BodyState<double>;

/// Largest pair distance of the configuration.
template <typename Scalar>
Scalar length_scale(const PairState<Scalar>& s) {
  Scalar scale(0);
  for (const auto& v : s.q) scale = std::max(scale, v.norm());
  return scale;
}

template <typename Scalar>
Scalar length_scale(const BodyState<Scalar>& b) {
  Scalar scale(0);
  for (int i = 0; i < b.size(); ++i)
    for (int j = i + 1; j < b.size(); ++j) scale = std::max(scale, (b.r[i] - b.r[j]).norm());
  return scale;
}

/// Smallest pair distance of the configuration.
template <typename Scalar>
Scalar min_separation(const PairState<Scalar>& s) {
  Scalar d = std::numeric_limits<Scalar>::infinity();
  for (const auto& v : s.q) d = std::min(d, v.norm());
  return d;
}

/// q_ij + q_jk + q_ki with the stored orientations resolved.
template <typename Scalar>
Vec3<Scalar> triangle_residual(const PairState<Scalar>& s, int i, int j, int k) {
  if (i == j || j == k || i == k) {
    throw DimensionError("triangle_residual needs three distinct indices");
  }
  return s.pos(i, j) + s.pos(j, k) + s.pos(k, i);
}

/// Same as triangle_residual, on the velocities.
template <typename Scalar>
Vec3<Scalar> velocity_triangle_residual(const PairState<Scalar>& s, int i, int j, int k) {
  if (i == j || j == k || i == k) {
    throw DimensionError("velocity_triangle_residual needs three distinct indices");
  }
  return s.vel(i, j) + s.vel(j, k) + s.vel(k, i);
}

template <typename Scalar>
struct TriangleReport {
  Scalar max_residual = Scalar(0);
  std::array<int, 3> worst{0, 0, 0};
};

/// Worst triangle residual over all i < j < k. For N = 2 the residual is zero.
template <typename Scalar>
TriangleReport<Scalar> max_triangle_residual(const PairState<Scalar>& s) {
  TriangleReport<Scalar> rep;
  const int n = s.n_bodies;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        const Scalar r = triangle_residual(s, i, j, k).norm();
        if (r > rep.max_residual) {
          rep.max_residual = r;
          rep.worst = {i, j, k};
        }
      }
  return rep;
}

/// Throws ConstraintViolation unless every triplet closes to within
/// rel_tol times the largest pair distance.
template <typename Scalar>
void require_realizable(const PairState<Scalar>& s, double rel_tol = kTriangleTolerance) {
  const auto rep = max_triangle_residual(s);
  const Scalar limit = Scalar(rel_tol) * length_scale(s);
  if (rep.max_residual > limit) {
    const auto& t = rep.worst;
    throw ConstraintViolation("triangle condition violated for bodies (" + std::to_string(t[0] + 1) +
                                  "," + std::to_string(t[1] + 1) + "," + std::to_string(t[2] + 1) +
                                  "): residual " + std::to_string(static_cast<double>(rep.max_residual)),
                              t, static_cast<double>(rep.max_residual));
  }
}

template <typename Scalar>
bool is_realizable(const PairState<Scalar>& s, double rel_tol = kTriangleTolerance) {
  return max_triangle_residual(s).max_residual <= Scalar(rel_tol) * length_scale(s);
}

/// Pair coordinates of a body configuration: q_ij = r_i - r_j, R the center of mass.
template <typename Scalar>
PairState<Scalar> bodies_to_pairs(const BodyState<Scalar>& b, const MassSystem<Scalar>& ms) {
  if (b.size() != ms.size() || b.rdot.size() != b.r.size()) {
    throw DimensionError("body state has " + std::to_string(b.size()) + " bodies, mass system has " +
                         std::to_string(ms.size()));
  }
  const int n = ms.size();
  PairState<Scalar> s(n);
  s.time = b.time;
  for (int i = 0; i < n; ++i) {
    s.R += ms.mass(i) * b.r[i];
    s.Rdot += ms.mass(i) * b.rdot[i];
  }
  s.R /= ms.total();
  s.Rdot /= ms.total();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      s.set_pos(i, j, b.r[i] - b.r[j]);
      s.set_vel(i, j, b.rdot[i] - b.rdot[j]);
    }
  return s;
}

/// r_i = R + sum_j (m_j / M) q_ij, and likewise for velocities.
template <typename Scalar>
BodyState<Scalar> pairs_to_bodies(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                  double rel_tol = kTriangleTolerance) {
  if (s.n_bodies != ms.size()) {
    throw DimensionError("pair state has " + std::to_string(s.n_bodies) + " bodies, mass system has " +
                         std::to_string(ms.size()));
  }
  require_realizable(s, rel_tol);
  const int n = ms.size();
  BodyState<Scalar> b(n);
  b.time = s.time;
  for (int i = 0; i < n; ++i) {
    Vec3<Scalar> r = Vec3<Scalar>::Zero();
    Vec3<Scalar> v = Vec3<Scalar>::Zero();
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      r += ms.mass(j) * s.pos(i, j);
      v += ms.mass(j) * s.vel(i, j);
    }
    b.r[i] = s.R + r / ms.total();
    b.rdot[i] = s.Rdot + v / ms.total();
  }
  return b;
}

}  // namespace pairspace
