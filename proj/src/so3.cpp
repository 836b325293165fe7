#include "navobs/so3.hpp"

#include <cassert>
#include <string>

namespace navobs {

DegenerateBearing::DegenerateBearing(std::size_t camera, double distance)
    : std::domain_error("bearing undefined: vehicle within standoff of camera " +
                        std::to_string(camera) + " (distance " +
                        std::to_string(distance) + " m)"),
      camera_(camera),
      distance_(distance) {}

RiccatiError::RiccatiError(const std::string& what, double value)
    : std::runtime_error(what), value_(value) {}

bool Rotation::is_valid(const Mat3& m, double tol) {
  if (!m.allFinite()) return false;
  if ((m.transpose() * m - Mat3::Identity()).norm() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation Rotation::from_matrix(const Mat3& m) {
  if (!is_valid(m)) throw ContractViolation("matrix is not a proper rotation");
  return Rotation(m, Unchecked{});
}

Rotation Rotation::orthonormalized(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0 ? -1.0 : 1.0;
  return Rotation(svd.matrixU() * d * svd.matrixV().transpose(), Unchecked{});
}

UnitQuaternion UnitQuaternion::from_unit(double w, double x, double y, double z) {
  const double n2 = w * w + x * x + y * y + z * z;
  if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kQuaternionTolerance)
    throw ContractViolation("quaternion is not unit norm");
  return UnitQuaternion(w, Vec3(x, y, z));
}

UnitQuaternion UnitQuaternion::normalized(double w, double x, double y, double z) {
  const double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(n > 0.0) || !std::isfinite(n))
    throw ContractViolation("cannot normalize a zero or non-finite quaternion");
  return UnitQuaternion(w / n, Vec3(x, y, z) / n);
}

// Shepperd's method: pick the largest of (w, x, y, z) to divide by.
UnitQuaternion UnitQuaternion::from_rotation(const Rotation& rot) {
  const Mat3& r = rot.matrix();
  const double tr = r.trace();
  double w, x, y, z;
  if (tr >= r(0, 0) && tr >= r(1, 1) && tr >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + tr);
    w = 0.25 * s;
    x = (r(2, 1) - r(1, 2)) / s;
    y = (r(0, 2) - r(2, 0)) / s;
    z = (r(1, 0) - r(0, 1)) / s;
  } else if (r(0, 0) >= r(1, 1) && r(0, 0) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(0, 0) - r(1, 1) - r(2, 2));
    w = (r(2, 1) - r(1, 2)) / s;
    x = 0.25 * s;
    y = (r(0, 1) + r(1, 0)) / s;
    z = (r(0, 2) + r(2, 0)) / s;
  } else if (r(1, 1) >= r(2, 2)) {
    const double s = 2.0 * std::sqrt(1.0 + r(1, 1) - r(0, 0) - r(2, 2));
    w = (r(0, 2) - r(2, 0)) / s;
    x = (r(0, 1) + r(1, 0)) / s;
    y = 0.25 * s;
    z = (r(1, 2) + r(2, 1)) / s;
  } else {
    const double s = 2.0 * std::sqrt(1.0 + r(2, 2) - r(0, 0) - r(1, 1));
    w = (r(1, 0) - r(0, 1)) / s;
    x = (r(0, 2) + r(2, 0)) / s;
    y = (r(1, 2) + r(2, 1)) / s;
    z = 0.25 * s;
  }
  if (w < 0.0) {
    w = -w;
    x = -x;
    y = -y;
    z = -z;
  }
  return normalized(w, x, y, z);
}

UnitQuaternion UnitQuaternion::operator*(const UnitQuaternion& o) const {
  return UnitQuaternion(w_ * o.w_ - v_.dot(o.v_), w_ * o.v_ + o.w_ * v_ + v_.cross(o.v_));
}

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
       -v.y(), v.x(), 0.0;
  return m;
}

Vec3 vex(const Mat3& a) {
  if ((a + a.transpose()).norm() > kRotationTolerance)
    throw ContractViolation("vex: matrix is not antisymmetric");
  return {a(2, 1), a(0, 2), a(1, 0)};
}

Vec3 psi(const Mat3& a) {
  return 0.5 * Vec3(a(2, 1) - a(1, 2), a(0, 2) - a(2, 0), a(1, 0) - a(0, 1));
}

double rot_distance(const Rotation& r) {
  return std::clamp(0.25 * (3.0 - r.matrix().trace()), 0.0, 1.0);
}

Rotation exp_so3(const Vec3& w) {
  const double th2 = w.squaredNorm();
  const double th = std::sqrt(th2);
  double a, b;
  if (th < 1e-6) {
    a = 1.0 - th2 / 6.0;
    b = 0.5 - th2 / 24.0;
  } else {
    a = std::sin(th) / th;
    b = (1.0 - std::cos(th)) / th2;
  }
  const Mat3 k = skew(w);
  return Rotation(Mat3::Identity() + a * k + b * k * k, Rotation::Unchecked{});
}

Vec3 smooth_projection(double c, double eps, const Vec3& phi_hat, const Vec3& mu) {
  assert(c > 0.0 && eps > 0.0);
  const double n = phi_hat.norm();
  const double dir = phi_hat.dot(mu);
  if (n < c || dir <= 0.0) return mu;
  assert(n > 0.0);
  const double theta = std::min(1.0, (n - c) / eps);
  return mu - (theta * dir / (n * n)) * phi_hat;
}

double sinc(double a) {
  if (a == 0.0) return 1.0;
  if (std::abs(a) < 1e-6) return 1.0 - a * a / 6.0;
  return std::sin(a) / a;
}

UnitQuaternion quat_step(const UnitQuaternion& q, const Vec3& w_hat, double tau) {
  const double half = 0.5 * w_hat.norm() * tau;
  const double c = std::cos(half);
  const double s = 0.5 * tau * sinc(half);
  // T(w) q = [-w.qv ; q0 w - w x qv]
  const double tw = -w_hat.dot(q.v_);
  const Vec3 tv = q.w_ * w_hat - w_hat.cross(q.v_);
  return UnitQuaternion(c * q.w_ + s * tw, c * q.v_ + s * tv);
}

Rotation quat_to_rot(const UnitQuaternion& q) {
  const double q0 = q.w();
  const Vec3& qv = q.vec();
  const Mat3 m = (q0 * q0 - qv.squaredNorm()) * Mat3::Identity() + 2.0 * q0 * skew(qv) +
                 2.0 * qv * qv.transpose();
  return Rotation(m, Rotation::Unchecked{});
}

}  // namespace navobs
