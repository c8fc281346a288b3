#pragma once

#include "pairspace/core.hpp"
#include "pairspace/kinetics.hpp"
#include "pairspace/ode.hpp"

#include <optional>
#include <string>
#include <vector>

namespace pairspace {

enum class Scheme { kRK4, kLeapfrog };

/// Fixed-step integration settings.
///
/// A non-positive `dt` selects default_time_step() at the initial state.
/// `tol_triangle` is relative to the largest pair distance. When
/// `collapse_cutoff` is positive the run stops once the smallest separation
/// falls below that fraction of its initial value.
struct IntegratorConfig {
  double dt = 0.0;
  double t_end = 1.0;
  Scheme scheme = Scheme::kRK4;
  int monitor_every = 1;
  double tol_triangle = kTriangleTolerance;
  double collapse_cutoff = 0.0;
};

template <typename Scalar>
struct Diagnostics {
  Scalar kinetic = Scalar(0);
  Scalar potential = Scalar(0);
  Scalar energy = Scalar(0);  // T - M Rdot^2 / 2 + V
  Scalar triangle_max_residual = Scalar(0);
  std::vector<Vec3<Scalar>> pair_angular_momenta;  // q_ij x mu_ij qdot_ij, canonical slot order
};

template <typename Scalar>
struct TrajectorySample {
  Scalar time = Scalar(0);
  PairState<Scalar> state;
  Diagnostics<Scalar> diagnostics;
};

enum class RunStatus {
  kCompleted,
  kCollapseCutoff,  // stopped by IntegratorConfig::collapse_cutoff
  kCollision,       // partial trajectory; `message` names the pair
};

template <typename Scalar>
struct Trajectory {
  std::vector<TrajectorySample<Scalar>> samples;
  RunStatus status = RunStatus::kCompleted;
  bool triangle_drift_warning = false;
  Scalar dt = Scalar(0);
  std::string message;
};

template <typename Scalar>
struct PairAccelerations {
  Vec3<Scalar> Rddot = Vec3<Scalar>::Zero();
  std::vector<Vec3<Scalar>> qddot;  // canonical slot order
};

namespace detail {

template <typename Scalar>
std::vector<Vec3<Scalar>> pair_accelerations_unchecked(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                                       const PotentialLaw<Scalar>& law) {
  const ReducedGradients<Scalar> a(s, ms, law);
  std::vector<Vec3<Scalar>> acc(s.q.size());
  for (std::size_t slot = 0; slot < s.q.size(); ++slot) {
    const auto [i, j] = pair_of_slot(static_cast<int>(slot), s.n_bodies);
    acc[slot] = multiplier_sum_J(a, ms, i, j) / ms.mu(i, j) - a(i, j);
  }
  return acc;
}

template <typename Scalar>
VecX<Scalar> pack(const PairState<Scalar>& s) {
  const auto p = static_cast<Eigen::Index>(s.q.size());
  VecX<Scalar> y(6 + 6 * p);
  y.template segment<3>(0) = s.R;
  y.template segment<3>(3) = s.Rdot;
  for (Eigen::Index k = 0; k < p; ++k) {
    y.template segment<3>(6 + 3 * k) = s.q[static_cast<std::size_t>(k)];
    y.template segment<3>(6 + 3 * (p + k)) = s.qdot[static_cast<std::size_t>(k)];
  }
  return y;
}

template <typename Scalar>
PairState<Scalar> unpack(const VecX<Scalar>& y, int n_bodies, Scalar t) {
  PairState<Scalar> s(n_bodies);
  const auto p = static_cast<Eigen::Index>(s.q.size());
  s.time = t;
  s.R = y.template segment<3>(0);
  s.Rdot = y.template segment<3>(3);
  for (Eigen::Index k = 0; k < p; ++k) {
    s.q[static_cast<std::size_t>(k)] = y.template segment<3>(6 + 3 * k);
    s.qdot[static_cast<std::size_t>(k)] = y.template segment<3>(6 + 3 * (p + k));
  }
  return s;
}

}  // namespace detail

/// qddot_ij = (J_ij - dv_ij/dq_ij) / mu_ij for every stored pair, Rddot = 0.
template <typename Scalar>
PairAccelerations<Scalar> pair_accelerations(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                                             const PotentialLaw<Scalar>& law,
                                             double tol_triangle = kTriangleTolerance) {
  if (s.n_bodies != ms.size()) throw DimensionError("pair state and mass system disagree on N");
  require_realizable(s, tol_triangle);
  return {Vec3<Scalar>::Zero(), detail::pair_accelerations_unchecked(s, ms, law)};
}

/// Shortest two-body period 2 pi sqrt(q^(n+1) / (n M)) over all pairs.
template <typename Scalar>
Scalar shortest_pair_period(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                            const PotentialLaw<Scalar>& law) {
  using std::pow;
  using std::sqrt;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (const auto& v : s.q) {
    const Scalar omega2 = law.n() * ms.total() * pow(v.norm(), -(law.n() + Scalar(1)));
    best = std::min(best, Scalar(2) * pi<Scalar>() / sqrt(omega2));
  }
  return best;
}

/// Crossing-time estimate sqrt(L^(n+1) / (n M)) with L the largest pair
/// distance; the unit in which run lengths are quoted.
template <typename Scalar>
Scalar dynamical_time(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  using std::pow;
  using std::sqrt;
  return sqrt(pow(length_scale(s), law.n() + Scalar(1)) / (law.n() * ms.total()));
}

/// 1e-3 of the shortest two-body period.
template <typename Scalar>
Scalar default_time_step(const PairState<Scalar>& s, const MassSystem<Scalar>& ms, const PotentialLaw<Scalar>& law) {
  return Scalar(1e-3) * shortest_pair_period(s, ms, law);
}

template <typename Scalar>
Diagnostics<Scalar> diagnose(const PairState<Scalar>& s, const MassSystem<Scalar>& ms,
                             const PotentialLaw<Scalar>& law) {
  Diagnostics<Scalar> d;
  d.kinetic = kinetic_energy(s, ms);
  d.potential = potential_energy(s, ms, law);
  d.energy = d.kinetic - Scalar(0.5) * ms.total() * s.Rdot.squaredNorm() + d.potential;
  d.triangle_max_residual = max_triangle_residual(s).max_residual;
  d.pair_angular_momenta.resize(s.q.size());
  for (std::size_t slot = 0; slot < s.q.size(); ++slot) {
    const auto [i, j] = pair_of_slot(static_cast<int>(slot), s.n_bodies);
    d.pair_angular_momenta[slot] = s.q[slot].cross(ms.mu(i, j) * s.qdot[slot]);
  }
  return d;
}

/// Fixed-step RK4 integration of the pair-space equations of motion.
///
/// The triangle conditions are monitored, never re-projected. A collision
/// during the run ends it with status kCollision and the samples gathered so
/// far; coincident bodies in the initial state throw CollisionError.
template <typename Scalar>
Trajectory<Scalar> integrate(const PairState<Scalar>& initial, const MassSystem<Scalar>& ms,
                             const PotentialLaw<Scalar>& law, const IntegratorConfig& cfg) {
  if (cfg.scheme != Scheme::kRK4) {
    throw DomainError("pair-space integration supports only the RK4 scheme");
  }
  if (initial.n_bodies != ms.size()) throw DimensionError("pair state and mass system disagree on N");
  if (!(Scalar(cfg.t_end) > initial.time)) throw DomainError("t_end must be after the initial time");
  if (cfg.monitor_every < 1) throw DomainError("monitor_every must be at least 1");
  require_realizable(initial, cfg.tol_triangle);
  // A collision already present at the start is an input error, not a run outcome.
  for (std::size_t slot = 0; slot < initial.q.size(); ++slot) {
    const auto [i, j] = pair_of_slot(static_cast<int>(slot), initial.n_bodies);
    detail::check_separation(initial.q[slot].norm(), detail::collision_floor(initial), i, j);
  }
  Scalar vscale(0);
  for (const auto& v : initial.qdot) vscale = std::max(vscale, v.norm());
  for (int i = 0; i < ms.size(); ++i)
    for (int j = i + 1; j < ms.size(); ++j)
      for (int k = j + 1; k < ms.size(); ++k) {
        const Scalar r = velocity_triangle_residual(initial, i, j, k).norm();
        if (r > Scalar(cfg.tol_triangle) * vscale) {
          throw ConstraintViolation("velocity triangle condition violated for bodies (" + std::to_string(i + 1) +
                                        "," + std::to_string(j + 1) + "," + std::to_string(k + 1) + ")",
                                    {i, j, k}, static_cast<double>(r));
        }
      }

  Trajectory<Scalar> out;
  const Scalar dt_max = cfg.dt > 0 ? Scalar(cfg.dt) : default_time_step(initial, ms, law);
  const Scalar t0 = initial.time;
  const Scalar t1 = Scalar(cfg.t_end);
  const long steps = step_count(t0, t1, dt_max);
  const Scalar h = (t1 - t0) / Scalar(steps);
  out.dt = h;

  const int n = initial.n_bodies;
  const auto p = static_cast<Eigen::Index>(initial.q.size());
  auto rhs = [&](Scalar t, const VecX<Scalar>& y) {
    const PairState<Scalar> s = detail::unpack(y, n, t);
    const auto acc = detail::pair_accelerations_unchecked(s, ms, law);
    VecX<Scalar> dy(y.size());
    dy.template segment<3>(0) = s.Rdot;
    dy.template segment<3>(3).setZero();
    for (Eigen::Index k = 0; k < p; ++k) {
      dy.template segment<3>(6 + 3 * k) = y.template segment<3>(6 + 3 * (p + k));
      dy.template segment<3>(6 + 3 * (p + k)) = acc[static_cast<std::size_t>(k)];
    }
    return dy;
  };

  auto record = [&](const PairState<Scalar>& s) {
    TrajectorySample<Scalar> sample{s.time, s, diagnose(s, ms, law)};
    if (sample.diagnostics.triangle_max_residual > Scalar(1e3 * cfg.tol_triangle) * length_scale(s)) {
      out.triangle_drift_warning = true;
    }
    out.samples.push_back(std::move(sample));
  };

  PairState<Scalar> state = initial;
  const Scalar initial_min_sep = min_separation(initial);
  try {
    record(state);
    VecX<Scalar> y = detail::pack(state);
    for (long step = 1; step <= steps; ++step) {
      const Scalar t = t0 + Scalar(step - 1) * h;
      y = rk4_step<Scalar>(rhs, t, y, h);
      const Scalar t_next = step == steps ? t1 : t0 + Scalar(step) * h;
      state = detail::unpack(y, n, t_next);
      const bool cutoff = cfg.collapse_cutoff > 0 &&
                          min_separation(state) < Scalar(cfg.collapse_cutoff) * initial_min_sep;
      if (step % cfg.monitor_every == 0 || step == steps || cutoff) record(state);
      if (cutoff) {
        out.status = RunStatus::kCollapseCutoff;
        out.message = "collapse cutoff reached at t = " + std::to_string(static_cast<double>(t_next));
        break;
      }
    }
  } catch (const CollisionError& e) {
    out.status = RunStatus::kCollision;
    out.message = e.what();
  }
  return out;
}

}  // namespace pairspace
