#pragma once

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace pairspace {

template <typename Scalar>
using Vec3 = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
using Mat3 = Eigen::Matrix<Scalar, 3, 3>;

using Vec3d = Vec3<double>;
using Mat3d = Mat3<double>;

/// pi in the working precision; works for non-builtin scalar types.
template <typename Scalar>
Scalar pi() {
  using std::acos;
  return acos(Scalar(-1));
}

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs whose sizes or index ranges disagree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the mathematical domain of an operation (x <= 0, n <= 0, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A pair state failed the triangle conditions. Indices are 0-based.
class ConstraintViolation : public Error {
 public:
  ConstraintViolation(const std::string& what, std::array<int, 3> triplet, double residual)
      : Error(what), triplet_(triplet), residual_(residual) {}

  std::array<int, 3> triplet() const { return triplet_; }
  double residual() const { return residual_; }

 private:
  std::array<int, 3> triplet_;
  double residual_;
};

/// Two bodies closer than the collision threshold. Indices are 0-based.
class CollisionError : public Error {
 public:
  CollisionError(const std::string& what, int i, int j, double separation)
      : Error(what), i_(i), j_(j), separation_(separation) {}

  int i() const { return i_; }
  int j() const { return j_; }
  double separation() const { return separation_; }

 private:
  int i_;
  int j_;
  double separation_;
};

}  // namespace pairspace
