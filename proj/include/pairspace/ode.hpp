#pragma once

#include <Eigen/Dense>

namespace pairspace {

template <typename Scalar>
using VecX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// One classical fourth-order Runge-Kutta step of y' = f(t, y).
template <typename Scalar, typename Rhs>
VecX<Scalar> rk4_step(const Rhs& f, Scalar t, const VecX<Scalar>& y, Scalar h) {
  const Scalar half = h / Scalar(2);
  const VecX<Scalar> k1 = f(t, y);
  const VecX<Scalar> k2 = f(t + half, y + half * k1);
  const VecX<Scalar> k3 = f(t + half, y + half * k2);
  const VecX<Scalar> k4 = f(t + h, y + h * k3);
  return y + (h / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
}

/// Number of fixed steps of size at most dt that cover [t0, t1].
template <typename Scalar>
long step_count(Scalar t0, Scalar t1, Scalar dt) {
  using std::ceil;
  const Scalar span = (t1 - t0) / dt;
  // Rounding in (t1 - t0) / dt must not add a sliver step.
  const long n = static_cast<long>(ceil(span - Scalar(1e-9)));
  return n < 1 ? 1 : n;
}

}  // namespace pairspace
