#include "navobs/trajectory.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace navobs {

double HarmonicSignal::value(double t) const {
  double s = offset;
  for (const auto& h : terms) s += h.amp * std::sin(h.freq * t + h.phase);
  return s;
}

double HarmonicSignal::rate(double t) const {
  double s = 0.0;
  for (const auto& h : terms) s += h.amp * h.freq * std::cos(h.freq * t + h.phase);
  return s;
}

double HarmonicSignal::accel(double t) const {
  double s = 0.0;
  for (const auto& h : terms) s -= h.amp * h.freq * h.freq * std::sin(h.freq * t + h.phase);
  return s;
}

std::string_view to_string(TrajectoryKind k) {
  switch (k) {
    case TrajectoryKind::circular: return "circular";
    case TrajectoryKind::eight: return "eight";
    case TrajectoryKind::lemniscate: return "lemniscate";
    case TrajectoryKind::custom_harmonic: return "custom-harmonic";
  }
  return "custom-harmonic";
}

TrajectoryKind trajectory_kind_from_string(std::string_view s) {
  if (s == "circular") return TrajectoryKind::circular;
  if (s == "eight") return TrajectoryKind::eight;
  if (s == "lemniscate") return TrajectoryKind::lemniscate;
  if (s == "custom-harmonic") return TrajectoryKind::custom_harmonic;
  throw ContractViolation("unknown trajectory kind '" + std::string(s) + "'");
}

HarmonicVector reference_angular_velocity() {
  using std::numbers::pi;
  return {HarmonicSignal{0.0, {{1.0, 0.1, pi}}},
          HarmonicSignal{0.0, {{0.5, 0.2, 0.0}}},
          HarmonicSignal{0.0, {{0.1, 0.3, pi / 3.0}}}};
}

Vec3 reference_gyro_bias() { return Vec3::Constant(2.0 * kDegToRad); }

TrajectorySpec TrajectorySpec::circular() {
  using std::numbers::pi;
  TrajectorySpec s;
  s.kind = TrajectoryKind::circular;
  s.position = {HarmonicSignal{2.5, {{1.075, pi / 4.0, pi / 2.0}}},
                HarmonicSignal{1.5, {{1.075, pi / 4.0, 0.0}}},
                HarmonicSignal{2.2, {}}};
  s.omega = reference_angular_velocity();
  s.R0 = exp_so3(0.5 * pi * Vec3::UnitY());
  s.bias_true = reference_gyro_bias();
  return s;
}

TrajectorySpec TrajectorySpec::eight() {
  using std::numbers::pi;
  TrajectorySpec s;
  s.kind = TrajectoryKind::eight;
  s.position = {HarmonicSignal{0.0, {{1.0, 0.5, pi / 2.0}}},
                HarmonicSignal{0.0, {{0.25, 1.0, 0.0}}},
                HarmonicSignal{0.0, {{-std::sqrt(3.0) / 4.0, 1.0, 0.0}}}};
  s.omega = reference_angular_velocity();
  s.R0 = exp_so3(0.5 * pi * Vec3::UnitY());
  s.bias_true = reference_gyro_bias();
  return s;
}

TrajectorySpec TrajectorySpec::lemniscate() {
  using std::numbers::pi;
  const double wr = 0.16 * pi;
  TrajectorySpec s;
  s.kind = TrajectoryKind::lemniscate;
  s.position = {HarmonicSignal{0.0, {{0.8, wr, pi / 2.0}}},
                HarmonicSignal{0.5, {{0.8, 2.0 * wr, 0.0}}},
                HarmonicSignal{1.0, {{0.8, 2.0 * wr, 0.0}}}};
  s.omega = {HarmonicSignal{}, HarmonicSignal{}, HarmonicSignal{}};
  s.R0 = exp_so3(-0.5 * pi * Vec3::UnitZ());
  s.bias_true = reference_gyro_bias();
  return s;
}

TruthGenerator::TruthGenerator(TrajectorySpec spec, double attitude_step)
    : spec_(std::move(spec)), h_(attitude_step) {
  if (!(h_ > 0.0)) throw ContractViolation("attitude integration step must be positive");
  grid_.push_back(UnitQuaternion::from_rotation(spec_.R0));
  constant_attitude_ = true;
  for (const auto& axis : spec_.omega) {
    if (axis.offset != 0.0) constant_attitude_ = false;
    for (const auto& h : axis.terms) {
      if (h.amp != 0.0) constant_attitude_ = false;
    }
  }
}

Vec3 TruthGenerator::omega(double t) const {
  return {spec_.omega[0].value(t), spec_.omega[1].value(t), spec_.omega[2].value(t)};
}

Vec3 TruthGenerator::position(double t) const {
  return {spec_.position[0].value(t), spec_.position[1].value(t), spec_.position[2].value(t)};
}

UnitQuaternion TruthGenerator::rk4(const UnitQuaternion& q, double t, double h) const {
  // q' = 0.5 q (0, w) as a 4-vector ODE.
  auto f = [this](const Eigen::Vector4d& y, double s) -> Eigen::Vector4d {
    const Vec3 w = omega(s);
    const Vec3 v = y.tail<3>();
    Eigen::Vector4d d;
    d[0] = -0.5 * v.dot(w);
    d.tail<3>() = 0.5 * (y[0] * w + v.cross(w));
    return d;
  };
  const Eigen::Vector4d y = q.coeffs();
  const Eigen::Vector4d k1 = f(y, t);
  const Eigen::Vector4d k2 = f(y + 0.5 * h * k1, t + 0.5 * h);
  const Eigen::Vector4d k3 = f(y + 0.5 * h * k2, t + 0.5 * h);
  const Eigen::Vector4d k4 = f(y + h * k3, t + h);
  const Eigen::Vector4d n = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  return UnitQuaternion::normalized(n[0], n[1], n[2], n[3]);
}

RigidBodyState TruthGenerator::at(double t) {
  if (t < 0.0) throw ContractViolation("truth requested at negative time");
  RigidBodyState s;
  s.t = t;
  s.p = position(t);
  s.v = {spec_.position[0].rate(t), spec_.position[1].rate(t), spec_.position[2].rate(t)};
  s.a = {spec_.position[0].accel(t), spec_.position[1].accel(t), spec_.position[2].accel(t)};
  s.omega = omega(t);
  if (constant_attitude_) {
    s.R = spec_.R0;
    return s;
  }
  const auto k = static_cast<std::size_t>(std::floor(t / h_ + 1e-9));
  while (grid_.size() <= k) {
    const double tk = static_cast<double>(grid_.size() - 1) * h_;
    grid_.push_back(rk4(grid_.back(), tk, h_));
  }
  const double tk = static_cast<double>(k) * h_;
  const double rem = t - tk;
  const UnitQuaternion q = rem > 1e-12 ? rk4(grid_[k], tk, rem) : grid_[k];
  s.R = Rotation::orthonormalized(quat_to_rot(q).matrix());
  return s;
}

RigidBodyState truth_at(const TrajectorySpec& spec, double t) {
  TruthGenerator gen(spec);
  return gen.at(t);
}

}  // namespace navobs
