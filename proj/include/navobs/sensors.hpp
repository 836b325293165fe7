#pragma once

// IMU synthesis from ground truth and the linear position outputs
// y = C_p(t) p for full position, ranges, bearings and altimeter.

#include "navobs/so3.hpp"
#include "navobs/types.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace navobs {

inline constexpr double kBearingStandoff = 1e-6;  // m

struct WorldConstants {
  double g = 9.81;
  Vec3 m_I = Vec3(0.033, 0.1, 0.49);
};

/// Ground truth at one instant. `a` is dv/dt, so the inertial apparent
/// acceleration is a - g e3.
struct RigidBodyState {
  double t = 0.0;
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
  Vec3 a = Vec3::Zero();
  Rotation R;
  Vec3 omega = Vec3::Zero();

  Vec3 apparent_acceleration(double g) const { return a - g * Vec3::UnitZ(); }
};

struct ImuSample {
  double t = 0.0;
  Vec3 gyro = Vec3::Zero();
  Vec3 accel = Vec3::Zero();
  Vec3 mag = Vec3::Zero();
};

struct PositionOutput {
  double t = 0.0;
  VecX y;
  MatX c_p;  // m x 3

  Eigen::Index rows() const { return y.size(); }
};

struct RangeAnchorSet {
  std::vector<Vec3> anchors;
  std::vector<double> alpha;
  bool use_altimeter = false;
  // Optional time-varying anchors; called as motion(i, t).
  std::function<Vec3(std::size_t, double)> motion;

  /// Uniform weights 1/n.
  static RangeAnchorSet uniform(std::vector<Vec3> anchors, bool altimeter = false);

  Vec3 anchor(std::size_t i, double t) const {
    return motion ? motion(i, t) : anchors[i];
  }
  /// Throws ContractViolation on empty anchors, size mismatch or weights
  /// that do not sum to one.
  void validate() const;
};

struct Camera {
  Vec3 position = Vec3::Zero();
  Rotation orientation;
};

struct BearingCameraSet {
  std::vector<Camera> cameras;
  bool use_altimeter = false;

  void validate() const;
};

/// Camera at `position` whose third axis points at `target`.
Camera look_at_camera(const Vec3& position, const Vec3& target);

ImuSample synth_imu(const RigidBodyState& state, const Vec3& bias,
                    const WorldConstants& world);

PositionOutput full_position_output(const Vec3& p, double t = 0.0);

/// Weighted-difference range output. A single anchor without altimeter
/// yields a zero row.
PositionOutput range_output(const Vec3& p, const RangeAnchorSet& set, double t = 0.0);

/// Per-camera block Pi(y_i) R_i^T. Throws DegenerateBearing within
/// kBearingStandoff of a camera center.
PositionOutput bearing_output(const Vec3& p, const BearingCameraSet& set, double t = 0.0);

/// Orthogonal projector onto the plane normal to unit `z`.
inline Mat3 projector(const Vec3& z) { return Mat3::Identity() - z * z.transpose(); }

// --- test-noise injection ---------------------------------------------------

struct NoiseSpec {
  double gyro = 0.0;    // rad/s
  double accel = 0.0;   // m/s^2
  double mag = 0.0;
  double output = 0.0;  // units of y

  bool is_zero() const { return gyro == 0.0 && accel == 0.0 && mag == 0.0 && output == 0.0; }
};

/// Seeded Gaussian source. Passed by reference to add_noise; never shared.
class NoiseGenerator {
 public:
  explicit NoiseGenerator(std::uint64_t seed) : engine_(seed) {}
  double gaussian(double sigma) {
    if (sigma == 0.0) return 0.0;
    return sigma * unit_(engine_);
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

ImuSample add_noise(const ImuSample& s, const NoiseSpec& spec, NoiseGenerator& gen);
PositionOutput add_noise(const PositionOutput& o, const NoiseSpec& spec, NoiseGenerator& gen);

}  // namespace navobs
