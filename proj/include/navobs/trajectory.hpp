#pragma once

// Analytic ground-truth trajectories. Position and body angular velocity
// are sums of sinusoids per axis, so v and dv/dt are exact derivatives;
// attitude is integrated from R0 under the angular-velocity profile.

#include "navobs/sensors.hpp"
#include "navobs/so3.hpp"

#include <array>
#include <string_view>
#include <vector>

namespace navobs {

/// amp * sin(freq * t + phase)
struct Harmonic {
  double amp = 0.0;
  double freq = 0.0;
  double phase = 0.0;

  friend bool operator==(const Harmonic&, const Harmonic&) = default;
};

struct HarmonicSignal {
  double offset = 0.0;
  std::vector<Harmonic> terms;

  double value(double t) const;
  double rate(double t) const;
  double accel(double t) const;

  friend bool operator==(const HarmonicSignal&, const HarmonicSignal&) = default;
};

using HarmonicVector = std::array<HarmonicSignal, 3>;

enum class TrajectoryKind { circular, eight, lemniscate, custom_harmonic };

std::string_view to_string(TrajectoryKind k);
TrajectoryKind trajectory_kind_from_string(std::string_view s);

struct TrajectorySpec {
  TrajectoryKind kind = TrajectoryKind::custom_harmonic;
  HarmonicVector position;
  HarmonicVector omega;
  Rotation R0;
  Vec3 bias_true = Vec3::Zero();

  /// Radius 1.075 m circle at 2.2 m, pi/4 rad/s, with the shared test
  /// angular-velocity profile and R0 = exp(pi/2 e2).
  static TrajectorySpec circular();
  /// (cos(t/2), sin(t)/4, -sqrt(3) sin(t)/4) with the shared profile.
  static TrajectorySpec eight();
  /// Lemniscate with w_r = 0.16 pi; constant yaw of -90 deg, zero roll and
  /// pitch, so omega = 0.
  static TrajectorySpec lemniscate();
};

/// omega(t) = (sin(0.1t + pi), 0.5 sin(0.2t), 0.1 sin(0.3t + pi/3)).
HarmonicVector reference_angular_velocity();

/// 2 deg/s on every gyro axis, in rad/s.
Vec3 reference_gyro_bias();

inline constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

/// Evaluates ground truth. Attitude comes from RK4 integration of
/// q' = 0.5 q (0, omega) on a fixed grid of step `attitude_step`, with the
/// grid states cached and renormalized; off-grid times take one partial
/// RK4 step from the preceding grid point.
class TruthGenerator {
 public:
  explicit TruthGenerator(TrajectorySpec spec, double attitude_step = 5e-4);

  RigidBodyState at(double t);
  Vec3 position(double t) const;
  const TrajectorySpec& spec() const { return spec_; }

 private:
  Vec3 omega(double t) const;
  UnitQuaternion rk4(const UnitQuaternion& q, double t, double h) const;

  TrajectorySpec spec_;
  double h_;
  std::vector<UnitQuaternion> grid_;
  bool constant_attitude_;
};

/// One-off evaluation; prefer a TruthGenerator for time series.
RigidBodyState truth_at(const TrajectorySpec& spec, double t);

}  // namespace navobs
