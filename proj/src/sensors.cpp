#include "navobs/sensors.hpp"

#include <cmath>
#include <numeric>

namespace navobs {

RangeAnchorSet RangeAnchorSet::uniform(std::vector<Vec3> anchors, bool altimeter) {
  RangeAnchorSet s;
  const std::size_t n = anchors.size();
  s.anchors = std::move(anchors);
  s.alpha.assign(n, n > 0 ? 1.0 / static_cast<double>(n) : 0.0);
  s.use_altimeter = altimeter;
  return s;
}

void RangeAnchorSet::validate() const {
  if (anchors.empty()) throw ContractViolation("range set: no anchors");
  if (alpha.size() != anchors.size())
    throw ContractViolation("range set: alpha length differs from anchor count");
  const double sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
  if (std::abs(sum - 1.0) > 1e-12) throw ContractViolation("range set: alpha must sum to 1");
}

void BearingCameraSet::validate() const {
  if (cameras.empty()) throw ContractViolation("bearing set: no cameras");
  for (const auto& c : cameras) {
    if (!Rotation::is_valid(c.orientation.matrix()))
      throw ContractViolation("bearing set: camera orientation is not a rotation");
  }
}

Camera look_at_camera(const Vec3& position, const Vec3& target) {
  const Vec3 d = target - position;
  if (!(d.norm() >= kBearingStandoff)) throw ContractViolation("look_at target coincides with the camera");
  const Vec3 z = d.normalized();
  // Any reference not parallel to the boresight works for the x axis.
  const Vec3 ref = std::abs(z.z()) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
  const Vec3 x = ref.cross(z).normalized();
  const Vec3 y = z.cross(x);
  Mat3 r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return {position, Rotation::orthonormalized(r)};
}

ImuSample synth_imu(const RigidBodyState& state, const Vec3& bias,
                    const WorldConstants& world) {
  const Mat3 rt = state.R.matrix().transpose();
  ImuSample s;
  s.t = state.t;
  s.gyro = state.omega + bias;
  s.accel = rt * state.apparent_acceleration(world.g);
  s.mag = rt * world.m_I;
  return s;
}

PositionOutput full_position_output(const Vec3& p, double t) {
  return {t, p, Mat3::Identity()};
}

PositionOutput range_output(const Vec3& p, const RangeAnchorSet& set, double t) {
  set.validate();
  const std::size_t n = set.anchors.size();
  const Eigen::Index m = static_cast<Eigen::Index>(n) + (set.use_altimeter ? 1 : 0);

  std::vector<Vec3> pos(n);
  VecX ybar(static_cast<Eigen::Index>(n));
  double ybar0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    pos[i] = set.anchor(i, t);
    const double d = (p - pos[i]).norm();
    ybar[static_cast<Eigen::Index>(i)] = 0.5 * (d * d - pos[i].squaredNorm());
    ybar0 += set.alpha[i] * ybar[static_cast<Eigen::Index>(i)];
  }

  PositionOutput out{t, VecX(m), MatX(m, 3)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto row = static_cast<Eigen::Index>(j);
    Vec3 pbar = Vec3::Zero();
    for (std::size_t i = 0; i < n; ++i) pbar += set.alpha[i] * (pos[i] - pos[j]);
    out.c_p.row(row) = pbar.transpose();
    out.y[row] = ybar[row] - ybar0;
  }
  if (set.use_altimeter) {
    out.c_p.row(m - 1) = Vec3::UnitZ().transpose();
    out.y[m - 1] = p.z();
  }
  return out;
}

PositionOutput bearing_output(const Vec3& p, const BearingCameraSet& set, double t) {
  if (set.cameras.empty()) throw ContractViolation("bearing set: no cameras");
  const std::size_t n = set.cameras.size();
  const Eigen::Index m = 3 * static_cast<Eigen::Index>(n) + (set.use_altimeter ? 1 : 0);
  PositionOutput out{t, VecX(m), MatX(m, 3)};
  for (std::size_t i = 0; i < n; ++i) {
    const Camera& cam = set.cameras[i];
    const Vec3 r = p - cam.position;
    const double dist = r.norm();
    if (!(dist >= kBearingStandoff)) throw DegenerateBearing(i, dist);
    const Mat3 rt = cam.orientation.matrix().transpose();
    const Vec3 bearing = rt * r / dist;
    const Mat3 block = projector(bearing) * rt;
    const auto row = 3 * static_cast<Eigen::Index>(i);
    out.c_p.middleRows<3>(row) = block;
    out.y.segment<3>(row) = block * cam.position;
  }
  if (set.use_altimeter) {
    out.c_p.row(m - 1) = Vec3::UnitZ().transpose();
    out.y[m - 1] = p.z();
  }
  return out;
}

ImuSample add_noise(const ImuSample& s, const NoiseSpec& spec, NoiseGenerator& gen) {
  ImuSample o = s;
  for (int i = 0; i < 3; ++i) o.gyro[i] += gen.gaussian(spec.gyro);
  for (int i = 0; i < 3; ++i) o.accel[i] += gen.gaussian(spec.accel);
  for (int i = 0; i < 3; ++i) o.mag[i] += gen.gaussian(spec.mag);
  return o;
}

PositionOutput add_noise(const PositionOutput& o, const NoiseSpec& spec, NoiseGenerator& gen) {
  PositionOutput r = o;
  for (Eigen::Index i = 0; i < r.y.size(); ++i) r.y[i] += gen.gaussian(spec.output);
  return r;
}

}  // namespace navobs
