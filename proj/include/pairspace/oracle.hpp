#pragma once

// Independent body-space Newtonian integrator, used to cross-check the
// pair-space formulation. Nothing here goes through pair coordinates.

#include "pairspace/core.hpp"
#include "pairspace/dynamics.hpp"
#include "pairspace/kinetics.hpp"
#include "pairspace/ode.hpp"

#include <string>
#include <vector>

namespace pairspace::oracle {

/// r''_i = -sum_{j != i} n m_j (r_i - r_j) / |r_i - r_j|^(n+2).
template <typename Scalar>
std::vector<Vec3<Scalar>> body_accelerations(const BodyState<Scalar>& b, const MassSystem<Scalar>& ms,
                                             const PotentialLaw<Scalar>& law) {
  if (b.size() != ms.size()) throw DimensionError("body state and mass system disagree on N");
  const int n = b.size();
  const Scalar floor = Scalar(kCollisionTolerance) * length_scale(b);
  std::vector<Vec3<Scalar>> acc(static_cast<std::size_t>(n), Vec3<Scalar>::Zero());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const Vec3<Scalar> d = b.r[i] - b.r[j];
      const Scalar dist = d.norm();
      pairspace::detail::check_separation(dist, floor, i, j);
      const Vec3<Scalar> f = (law.n() * law.inverse_power_n2(dist)) * d;
      acc[i] -= ms.mass(j) * f;
      acc[j] += ms.mass(i) * f;
    }
  return acc;
}

template <typename Scalar>
Scalar total_energy(const BodyState<Scalar>& b, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  Scalar e(0);
  for (int i = 0; i < b.size(); ++i) {
    e += Scalar(0.5) * ms.mass(i) * b.rdot[i].squaredNorm();
    for (int j = i + 1; j < b.size(); ++j)
      e -= ms.mass(i) * ms.mass(j) * law.inverse_power_n((b.r[i] - b.r[j]).norm());
  }
  return e;
}

template <typename Scalar>
Vec3<Scalar> angular_momentum(const BodyState<Scalar>& b, const MassSystem<Scalar>& ms) {
  Vec3<Scalar> l = Vec3<Scalar>::Zero();
  for (int i = 0; i < b.size(); ++i) l += b.r[i].cross(ms.mass(i) * b.rdot[i]);
  return l;
}

template <typename Scalar>
struct BodySample {
  Scalar time = Scalar(0);
  BodyState<Scalar> state;
  Scalar energy = Scalar(0);
  Vec3<Scalar> angular_momentum = Vec3<Scalar>::Zero();
};

template <typename Scalar>
struct BodyTrajectory {
  std::vector<BodySample<Scalar>> samples;
  RunStatus status = RunStatus::kCompleted;
  Scalar dt = Scalar(0);
  std::string message;
};

namespace detail {

template <typename Scalar>
VecX<Scalar> pack(const BodyState<Scalar>& b) {
  const auto n = static_cast<Eigen::Index>(b.size());
  VecX<Scalar> y(6 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    y.template segment<3>(3 * i) = b.r[static_cast<std::size_t>(i)];
    y.template segment<3>(3 * (n + i)) = b.rdot[static_cast<std::size_t>(i)];
  }
  return y;
}

template <typename Scalar>
BodyState<Scalar> unpack(const VecX<Scalar>& y, int n_bodies, Scalar t) {
  BodyState<Scalar> b(n_bodies);
  b.time = t;
  const auto n = static_cast<Eigen::Index>(n_bodies);
  for (Eigen::Index i = 0; i < n; ++i) {
    b.r[static_cast<std::size_t>(i)] = y.template segment<3>(3 * i);
    b.rdot[static_cast<std::size_t>(i)] = y.template segment<3>(3 * (n + i));
  }
  return b;
}

}  // namespace detail

/// Fixed-step integration in body coordinates. The step count and step size
/// follow the same rule as pairspace::integrate so both runs share a time grid.
/// A non-positive cfg.dt uses the pair-space default step of the initial state.
template <typename Scalar>
BodyTrajectory<Scalar> integrate_bodies(const BodyState<Scalar>& initial, const MassSystem<Scalar>& ms,
                                        const PotentialLaw<Scalar>& law, const IntegratorConfig& cfg) {
  if (initial.size() != ms.size()) throw DimensionError("body state and mass system disagree on N");
  if (!(Scalar(cfg.t_end) > initial.time)) throw DomainError("t_end must be after the initial time");
  if (cfg.monitor_every < 1) throw DomainError("monitor_every must be at least 1");

  BodyTrajectory<Scalar> out;
  const Scalar dt_max =
      cfg.dt > 0 ? Scalar(cfg.dt) : default_time_step(bodies_to_pairs(initial, ms), ms, law);
  const Scalar t0 = initial.time;
  const Scalar t1 = Scalar(cfg.t_end);
  const long steps = step_count(t0, t1, dt_max);
  const Scalar h = (t1 - t0) / Scalar(steps);
  out.dt = h;
  const int n = initial.size();

  auto rhs = [&](Scalar t, const VecX<Scalar>& y) {
    const BodyState<Scalar> b = detail::unpack(y, n, t);
    const auto acc = body_accelerations(b, ms, law);
    VecX<Scalar> dy(y.size());
    const auto nn = static_cast<Eigen::Index>(n);
    dy.head(3 * nn) = y.tail(3 * nn);
    for (Eigen::Index i = 0; i < nn; ++i) dy.template segment<3>(3 * (nn + i)) = acc[static_cast<std::size_t>(i)];
    return dy;
  };

  auto record = [&](const BodyState<Scalar>& b) {
    out.samples.push_back({b.time, b, total_energy(b, ms, law), angular_momentum(b, ms)});
  };

  BodyState<Scalar> state = initial;
  const Scalar initial_min_sep = min_separation(bodies_to_pairs(initial, ms));
  try {
    record(state);
    VecX<Scalar> y = detail::pack(state);
    std::vector<Vec3<Scalar>> acc;
    if (cfg.scheme == Scheme::kLeapfrog) acc = body_accelerations(state, ms, law);
    for (long step = 1; step <= steps; ++step) {
      const Scalar t = t0 + Scalar(step - 1) * h;
      const Scalar t_next = step == steps ? t1 : t0 + Scalar(step) * h;
      if (cfg.scheme == Scheme::kRK4) {
        y = rk4_step<Scalar>(rhs, t, y, h);
        state = detail::unpack(y, n, t_next);
      } else {
        // Kick-drift-kick velocity Verlet.
        for (int i = 0; i < n; ++i) {
          state.rdot[i] += (h / Scalar(2)) * acc[i];
          state.r[i] += h * state.rdot[i];
        }
        acc = body_accelerations(state, ms, law);
        for (int i = 0; i < n; ++i) state.rdot[i] += (h / Scalar(2)) * acc[i];
        state.time = t_next;
      }
      const bool cutoff = cfg.collapse_cutoff > 0 &&
                          min_separation(bodies_to_pairs(state, ms)) < Scalar(cfg.collapse_cutoff) * initial_min_sep;
      if (step % cfg.monitor_every == 0 || step == steps || cutoff) record(state);
      if (cutoff) {
        out.status = RunStatus::kCollapseCutoff;
        break;
      }
    }
  } catch (const CollisionError& e) {
    out.status = RunStatus::kCollision;
    out.message = e.what();
  }
  return out;
}

}  // namespace pairspace::oracle
