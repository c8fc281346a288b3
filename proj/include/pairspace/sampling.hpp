#pragma once

// Seeded random instances for verification runs. Built on std::mt19937_64
// with an explicit bits-to-double map, so a seed gives the same numbers on
// every standard library.

#include "pairspace/core.hpp"

#include <cstdint>
#include <random>

namespace pairspace::sampling {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Log-uniform on [lo, hi].
  double log_uniform(double lo, double hi) { return lo * std::pow(hi / lo, uniform()); }
  int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }

  Vec3d in_ball(double radius) {
    for (;;) {
      const Vec3d v(uniform(-1, 1), uniform(-1, 1), uniform(-1, 1));
      if (v.squaredNorm() <= 1.0) return radius * v;
    }
  }

 private:
  std::mt19937_64 engine_;
};

inline MassSystem<double> random_masses(Rng& rng, int n, double lo = 0.1, double hi = 10.0) {
  std::vector<double> m(static_cast<std::size_t>(n));
  for (auto& x : m) x = rng.log_uniform(lo, hi);
  return MassSystem<double>(m);
}

/// Bodies in the unit ball with pairwise separations of at least
/// `min_separation`, velocities in a ball of radius `speed`, shifted to the
/// barycentric frame.
inline BodyState<double> random_bodies(Rng& rng, const MassSystem<double>& ms, double min_separation = 0.2,
                                       double speed = 0.5) {
  const int n = ms.size();
  BodyState<double> b(n);
  for (;;) {
    for (int i = 0; i < n; ++i) {
      b.r[static_cast<std::size_t>(i)] = rng.in_ball(1.0);
      b.rdot[static_cast<std::size_t>(i)] = rng.in_ball(speed);
    }
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = (b.r[i] - b.r[j]).norm() >= min_separation;
    if (ok) break;
  }
  Vec3d rc = Vec3d::Zero();
  Vec3d vc = Vec3d::Zero();
  for (int i = 0; i < n; ++i) {
    rc += ms.mass(i) * b.r[i];
    vc += ms.mass(i) * b.rdot[i];
  }
  rc /= ms.total();
  vc /= ms.total();
  for (int i = 0; i < n; ++i) {
    b.r[i] -= rc;
    b.rdot[i] -= vc;
  }
  return b;
}

/// Barycentric cluster in the unit ball with every separation at least
/// `min_fraction` of the largest one, set in rigid rotation about a random
/// axis near +z at 0.8 to 1.4 times sqrt(M / L^3) (n = 1 scaling), plus a
/// random velocity of up to 15% of the rotation speed. Such clusters stay
/// free of close encounters over about one dynamical time.
inline BodyState<double> rotating_cluster(Rng& rng, const MassSystem<double>& ms, double min_fraction = 0.5) {
  const int n = ms.size();
  BodyState<double> b(n);
  for (;;) {
    for (int i = 0; i < n; ++i) b.r[i] = rng.in_ball(1.0);
    Vec3d rc = Vec3d::Zero();
    for (int i = 0; i < n; ++i) rc += ms.mass(i) * b.r[i];
    rc /= ms.total();
    for (int i = 0; i < n; ++i) b.r[i] -= rc;
    double closest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) closest = std::min(closest, (b.r[i] - b.r[j]).norm());
    if (closest >= min_fraction * length_scale(b)) break;
  }
  const double L = length_scale(b);
  Vec3d axis = rng.in_ball(1.0);
  axis.z() += 2.0;
  axis.normalize();
  const double w = std::sqrt(ms.total() / (L * L * L)) * rng.uniform(0.8, 1.4);
  Vec3d vc = Vec3d::Zero();
  for (int i = 0; i < n; ++i) {
    b.rdot[i] = w * axis.cross(b.r[i]) + rng.in_ball(0.15 * w * L);
    vc += ms.mass(i) * b.rdot[i];
  }
  vc /= ms.total();
  for (int i = 0; i < n; ++i) b.rdot[i] -= vc;
  return b;
}

/// Hierarchical triple: bodies 1 and 2 on an inner orbit of semi-major axis 1
/// and eccentricity below 0.3 (started at apocentre), body 3 on a circular
/// outer orbit of radius 6 to 10 at a random phase and inclination. n = 1.
/// Returns the outer radius through `outer_radius` when non-null.
inline BodyState<double> hierarchical_triple(Rng& rng, const MassSystem<double>& ms, double* outer_radius = nullptr) {
  const double e = 0.3 * rng.uniform();
  const double a_out = 6.0 + 4.0 * rng.uniform();
  const double inc = 0.5 * rng.uniform();
  const double ph = 2.0 * 3.14159265358979323846 * rng.uniform();
  const double m1 = ms.mass(0);
  const double m2 = ms.mass(1);
  const double m3 = ms.mass(2);
  const double mb = m1 + m2;
  const double M = ms.total();
  const Vec3d r(1.0 + e, 0, 0);
  const Vec3d v(0, std::sqrt(mb * (1 - e) / (1 + e)), 0);
  const Vec3d R(a_out * std::cos(ph), a_out * std::sin(ph) * std::cos(inc), a_out * std::sin(ph) * std::sin(inc));
  const double vo = std::sqrt(M / a_out);
  const Vec3d V(-vo * std::sin(ph), vo * std::cos(ph) * std::cos(inc), vo * std::cos(ph) * std::sin(inc));
  BodyState<double> b(3);
  const Vec3d cb = -m3 / M * R;
  const Vec3d cv = -m3 / M * V;
  b.r[0] = cb + m2 / mb * r;
  b.r[1] = cb - m1 / mb * r;
  b.r[2] = mb / M * R;
  b.rdot[0] = cv + m2 / mb * v;
  b.rdot[1] = cv - m1 / mb * v;
  b.rdot[2] = mb / M * V;
  if (outer_radius) *outer_radius = a_out;
  return b;
}

}  // namespace pairspace::sampling
