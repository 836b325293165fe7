#pragma once

// Rotation-group primitives, bounded maps and quaternion kinematics.

#include "navobs/types.hpp"

#include <algorithm>
#include <cmath>

namespace navobs {

inline constexpr double kRotationTolerance = 1e-9;
inline constexpr double kQuaternionTolerance = 1e-12;

/// Proper rotation matrix. Construction validates orthonormality and
/// det = +1 to kRotationTolerance; it never re-orthonormalizes silently.
class Rotation {
 public:
  Rotation() : m_(Mat3::Identity()) {}

  /// Throws ContractViolation when `m` is not in SO(3).
  static Rotation from_matrix(const Mat3& m);
  /// Projects an arbitrary matrix onto the nearest rotation (polar factor).
  static Rotation orthonormalized(const Mat3& m);
  static Rotation identity() { return Rotation(); }

  static bool is_valid(const Mat3& m, double tol = kRotationTolerance);

  const Mat3& matrix() const { return m_; }
  Rotation transpose() const { return Rotation(m_.transpose(), Unchecked{}); }
  Rotation operator*(const Rotation& o) const {
    return Rotation(m_ * o.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& v) const { return m_ * v; }

  friend bool operator==(const Rotation&, const Rotation&) = default;

 private:
  struct Unchecked {};
  Rotation(const Mat3& m, Unchecked) : m_(m) {}
  friend Rotation exp_so3(const Vec3& w);
  friend class UnitQuaternion;
  friend Rotation quat_to_rot(const class UnitQuaternion& q);

  Mat3 m_;
};

/// Scalar-first unit quaternion (q0, qv).
class UnitQuaternion {
 public:
  UnitQuaternion() : w_(1.0), v_(Vec3::Zero()) {}

  /// Throws ContractViolation unless |q| = 1 within kQuaternionTolerance.
  static UnitQuaternion from_unit(double w, double x, double y, double z);
  /// Explicit normalization of an arbitrary nonzero 4-vector.
  static UnitQuaternion normalized(double w, double x, double y, double z);
  static UnitQuaternion from_rotation(const Rotation& r);
  static UnitQuaternion identity() { return UnitQuaternion(); }

  double w() const { return w_; }
  const Vec3& vec() const { return v_; }
  double norm() const { return std::sqrt(w_ * w_ + v_.squaredNorm()); }
  Eigen::Vector4d coeffs() const { return {w_, v_.x(), v_.y(), v_.z()}; }

  /// Hamilton product.
  UnitQuaternion operator*(const UnitQuaternion& o) const;

  friend bool operator==(const UnitQuaternion&, const UnitQuaternion&) = default;

 private:
  UnitQuaternion(double w, const Vec3& v) : w_(w), v_(v) {}
  friend UnitQuaternion quat_step(const UnitQuaternion&, const Vec3&, double);

  double w_;
  Vec3 v_;
};

Mat3 skew(const Vec3& v);

/// Inverse of skew. Throws ContractViolation if `a` is not antisymmetric
/// within kRotationTolerance.
Vec3 vex(const Mat3& a);

/// vex of the antisymmetric part, defined on all of R^{3x3}.
Vec3 psi(const Mat3& a);

/// Normalized rotation distance tr(I - R)/4, in [0, 1].
double rot_distance(const Rotation& r);

/// Rodrigues exponential of a rotation vector.
Rotation exp_so3(const Vec3& w);

/// Rotation about a unit axis by `angle` radians.
inline Rotation axis_angle(const Vec3& axis, double angle) {
  return exp_so3(axis.normalized() * angle);
}

/// min(1, c/|x|) x. Zero maps to zero.
template <typename Derived>
typename Derived::PlainObject sat(double c, const Eigen::MatrixBase<Derived>& x) {
  const double n = x.norm();
  if (n == 0.0) return x;
  return std::min(1.0, c / n) * x;
}

/// Smooth projection keeping an estimate inside the ball of radius c + eps.
Vec3 smooth_projection(double c, double eps, const Vec3& phi_hat, const Vec3& mu);

/// One closed-form step of q' = 0.5 q (0, w) over `tau` seconds. Preserves
/// the unit norm without renormalization.
UnitQuaternion quat_step(const UnitQuaternion& q, const Vec3& w_hat, double tau);

Rotation quat_to_rot(const UnitQuaternion& q);

/// sin(a)/a with sinc(0) = 1.
double sinc(double a);

}  // namespace navobs
