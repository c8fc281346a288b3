#pragma once

// Independent oracles and fixtures shared by the unit tests.

#include "pairspace/pairspace.hpp"
#include "pairspace/sampling.hpp"

#include <cmath>
#include <functional>

namespace testing_support {

using namespace pairspace;

/// Plain bisection on [lo, hi]; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Direct body-space kinetic energy.
inline double body_kinetic(const BodyState<double>& b, const MassSystem<double>& ms) {
  double t = 0.0;
  for (int i = 0; i < ms.size(); ++i) t += 0.5 * ms.mass(i) * b.rdot[i].squaredNorm();
  return t;
}

/// Direct body-space potential sum -m_i m_j / r^n.
inline double body_potential(const BodyState<double>& b, const MassSystem<double>& ms, double n) {
  double v = 0.0;
  for (int i = 0; i < ms.size(); ++i)
    for (int j = i + 1; j < ms.size(); ++j) v -= ms.mass(i) * ms.mass(j) / std::pow((b.r[i] - b.r[j]).norm(), n);
  return v;
}

inline Vec3d body_angular_momentum(const BodyState<double>& b, const MassSystem<double>& ms) {
  Vec3d l = Vec3d::Zero();
  for (int i = 0; i < ms.size(); ++i) l += ms.mass(i) * b.r[i].cross(b.rdot[i]);
  return l;
}

/// Equilateral pair state in the xy-plane with side q, built by hand.
inline PairState<double> equilateral_state(double q) {
  const double h = std::sqrt(3.0) / 2.0;
  BodyState<double> b(3);
  b.r[0] = Vec3d(0, 0, 0);
  b.r[1] = Vec3d(q, 0, 0);
  b.r[2] = Vec3d(0.5 * q, h * q, 0);
  return bodies_to_pairs(b, MassSystem<double>({1.0, 1.0, 1.0}));
}

}  // namespace testing_support
