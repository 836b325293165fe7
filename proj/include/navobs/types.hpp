#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace navobs {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat9 = Eigen::Matrix<double, 9, 9>;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

// Caller broke a documented precondition (non-antisymmetric input to vex,
// invalid rotation, mismatched dimensions, ...).
class ContractViolation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Bearing requested too close to a camera center.
class DegenerateBearing : public std::domain_error {
 public:
  DegenerateBearing(std::size_t camera, double distance);
  std::size_t camera() const { return camera_; }
  double distance() const { return distance_; }

 private:
  std::size_t camera_;
  double distance_;
};

// Riccati propagation lost positive definiteness, or the algebraic solver
// failed. `value()` carries the offending eigenvalue or final residual.
class RiccatiError : public std::runtime_error {
 public:
  RiccatiError(const std::string& what, double value);
  double value() const { return value_; }

 private:
  double value_;
};

}  // namespace navobs
