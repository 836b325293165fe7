#include "navobs/sensors.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace navobs;
using navobs::test::random_vec;
using navobs::test::uniform;

namespace {

RigidBodyState state_with(const Rotation& r, const Vec3& a = Vec3::Zero()) {
  RigidBodyState s;
  s.R = r;
  s.a = a;
  s.omega = Vec3(0.1, -0.2, 0.3);
  return s;
}

BearingCameraSet lemniscate_cameras() {
  const std::array<Vec3, 4> pos = {Vec3(0, 0, 2.8), Vec3(2.89, 0, 2.57), Vec3(-2.44, 0, 2.42),
                                   Vec3(0.08, 2.65, 2.37)};
  const std::array<Eigen::Vector4d, 4> q = {
      Eigen::Vector4d(0, 1, 0, 0), Eigen::Vector4d(0.5, 0, -0.86, 0),
      Eigen::Vector4d(0.45, 0, 0.89, 0), Eigen::Vector4d(0.32, 0.63, -0.63, 0.32)};
  BearingCameraSet set;
  for (std::size_t i = 0; i < 4; ++i) {
    const auto uq = UnitQuaternion::normalized(q[i][0], q[i][1], q[i][2], q[i][3]);
    set.cameras.push_back({pos[i], quat_to_rot(uq)});
  }
  return set;
}

}  // namespace

TEST_CASE("synth_imu") {
  const WorldConstants world;
  SUBCASE("identity attitude and zero bias") {
    const ImuSample s = synth_imu(state_with(Rotation::identity()), Vec3::Zero(), world);
    CHECK(s.gyro == Vec3(0.1, -0.2, 0.3));
    CHECK(s.mag == world.m_I);
  }
  SUBCASE("hover reads -g R^T e3") {
    for (int i = 0; i < 20; ++i) {
      const Rotation r = exp_so3(random_vec(3.0));
      const ImuSample s = synth_imu(state_with(r), Vec3::Zero(), world);
      CHECK((s.accel + world.g * r.matrix().transpose() * Vec3::UnitZ()).norm() < 1e-14);
      CHECK(s.accel.norm() == doctest::Approx(world.g).epsilon(1e-14));
    }
  }
  SUBCASE("magnetometer at the reference initial attitude") {
    const Rotation r = exp_so3(0.5 * std::numbers::pi * Vec3::UnitY());
    const ImuSample s = synth_imu(state_with(r), Vec3::Zero(), world);
    // R^T m_I for a quarter turn about e2: (x, y, z) -> (-z, y, x).
    CHECK((s.mag - Vec3(-0.49, 0.1, 0.033)).norm() < 1e-15);
    CHECK(s.mag.norm() == doctest::Approx(world.m_I.norm()).epsilon(1e-12));
  }
  SUBCASE("bias and apparent acceleration") {
    const Vec3 a(0.3, -1.2, 0.5), b(0.01, 0.02, -0.03);
    const Rotation r = exp_so3(Vec3(0.2, 0.5, -0.7));
    const ImuSample s = synth_imu(state_with(r, a), b, world);
    CHECK((s.gyro - (Vec3(0.1, -0.2, 0.3) + b)).norm() < 1e-15);
    CHECK((r.matrix() * s.accel + world.g * Vec3::UnitZ() - a).norm() < 1e-9);
    CHECK(s.accel.norm() == doctest::Approx((a - world.g * Vec3::UnitZ()).norm()));
  }
}

TEST_CASE("full_position_output") {
  CHECK(full_position_output(Vec3::Zero()).y.isZero());
  const PositionOutput o = full_position_output(Vec3(1, 2, 3));
  CHECK(o.y == Vec3(1, 2, 3));
  CHECK(o.c_p == Mat3::Identity());
  CHECK(o.c_p.fullPivLu().rank() == 3);
}

TEST_CASE("range_output hand-evaluated case") {
  RangeAnchorSet set;
  set.anchors = {Vec3::Zero(), Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
  set.alpha = {1, 0, 0, 0};
  const PositionOutput o = range_output(Vec3(1, 2, 3), set);
  CHECK((o.y - Eigen::Vector4d(0, -1, -2, -3)).norm() < 1e-14);
  MatX rows(4, 3);
  rows << 0, 0, 0, -1, 0, 0, 0, -1, 0, 0, 0, -1;
  CHECK(o.c_p == rows);
  CHECK((o.y - o.c_p * Vec3(1, 2, 3)).norm() < 1e-14);
}

TEST_CASE("range_output single anchor and altimeter") {
  RangeAnchorSet one = RangeAnchorSet::uniform({Vec3(1, 1, 1)});
  const PositionOutput o = range_output(Vec3(3, 2, 1), one);
  CHECK(o.rows() == 1);
  CHECK(o.y[0] == 0.0);
  CHECK(o.c_p.isZero());

  one.use_altimeter = true;
  const PositionOutput h = range_output(Vec3(3, 2, 1.5), one);
  CHECK(h.rows() == 2);
  CHECK(h.c_p.row(1) == Vec3::UnitZ().transpose());
  CHECK(h.y[1] == 1.5);
}

TEST_CASE("range_output consistency and position independence") {
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Vec3> anchors;
    const int n = 1 + trial % 6;
    for (int i = 0; i < n; ++i) anchors.push_back(random_vec(5.0));
    const RangeAnchorSet set = RangeAnchorSet::uniform(anchors, trial % 2 == 0);
    const Vec3 p1 = random_vec(10.0), p2 = random_vec(10.0);
    const PositionOutput o1 = range_output(p1, set), o2 = range_output(p2, set);
    CHECK((o1.y - o1.c_p * p1).norm() < 1e-10);
    CHECK(o1.c_p == o2.c_p);
  }
}

TEST_CASE("range anchor validation") {
  RangeAnchorSet empty;
  CHECK_THROWS_AS(empty.validate(), ContractViolation);
  RangeAnchorSet bad;
  bad.anchors = {Vec3::Zero(), Vec3::UnitX()};
  bad.alpha = {0.5, 0.6};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
  bad.alpha = {0.5};
  CHECK_THROWS_AS(bad.validate(), ContractViolation);
}

TEST_CASE("bearing_output") {
  SUBCASE("camera at the origin looking along e3") {
    BearingCameraSet set{{Camera{Vec3::Zero(), Rotation::identity()}}, false};
    const PositionOutput o = bearing_output(Vec3::UnitZ(), set);
    CHECK(o.y.isZero());
    CHECK((o.c_p * Vec3::UnitZ()).norm() < 1e-15);
  }
  SUBCASE("random cameras satisfy the projection identity") {
    for (int trial = 0; trial < 500; ++trial) {
      BearingCameraSet set;
      for (int i = 0; i < 3; ++i) set.cameras.push_back({random_vec(4.0), exp_so3(random_vec(3.0))});
      set.use_altimeter = trial % 3 == 0;
      const Vec3 p = random_vec(4.0);
      const PositionOutput o = bearing_output(p, set);
      CHECK(o.rows() == 9 + (set.use_altimeter ? 1 : 0));
      CHECK((o.y - o.c_p * p).norm() < 1e-12);
      for (std::size_t i = 0; i < set.cameras.size(); ++i) {
        const Mat3 block = o.c_p.block(3 * static_cast<Eigen::Index>(i), 0, 3, 3);
        CHECK((block * (p - set.cameras[i].position)).norm() < 1e-12);
        const Vec3 sv = Eigen::JacobiSVD<Mat3>(block).singularValues();
        CHECK(sv[1] > 1e-6);
        CHECK(sv[2] < 1e-12);
      }
    }
  }
  SUBCASE("four-camera rig on the lemniscate") {
    const BearingCameraSet set = lemniscate_cameras();
    for (const auto& c : set.cameras) CHECK(Rotation::is_valid(c.orientation.matrix(), 1e-12));
    const Vec3 p(0.8, 0.5, 1.0);
    const PositionOutput o = bearing_output(p, set);
    CHECK(o.rows() == 12);
    CHECK((o.y - o.c_p * p).norm() < 1e-10);
  }
  SUBCASE("standoff") {
    BearingCameraSet set{{Camera{Vec3(1, 1, 1), Rotation::identity()}}, false};
    CHECK_THROWS_AS(bearing_output(Vec3(1, 1, 1 + 1e-7), set), DegenerateBearing);
    CHECK_NOTHROW(bearing_output(Vec3(1, 1, 1 + 1e-5), set));
    try {
      bearing_output(Vec3(1, 1, 1), set);
    } catch (const DegenerateBearing& e) {
      CHECK(e.camera() == 0);
      CHECK(e.distance() == 0.0);
    }
  }
}

TEST_CASE("look_at_camera points its third axis at the target") {
  const Camera c = look_at_camera(Vec3(2, 2, 2), Vec3::Zero());
  CHECK((c.orientation.matrix().col(2) - Vec3(-1, -1, -1).normalized()).norm() < 1e-15);
  CHECK(Rotation::is_valid(c.orientation.matrix(), 1e-12));
  const Camera down = look_at_camera(Vec3(0, 0, 3), Vec3::Zero());
  CHECK((down.orientation.matrix().col(2) + Vec3::UnitZ()).norm() < 1e-15);
}

TEST_CASE("noise injection") {
  ImuSample s;
  s.gyro = Vec3(1, 2, 3);
  s.accel = Vec3(0, 0, -9.81);
  s.mag = Vec3(0.1, 0.2, 0.3);
  NoiseGenerator g0(7);
  const ImuSample same = add_noise(s, NoiseSpec{}, g0);
  CHECK(same.gyro == s.gyro);
  CHECK(same.accel == s.accel);
  CHECK(same.mag == s.mag);

  NoiseSpec spec{0.01, 0.01, 0.01, 0.01};
  NoiseGenerator a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const ImuSample x = add_noise(s, spec, a), y = add_noise(s, spec, b);
    CHECK(x.gyro == y.gyro);
    CHECK(x.accel == y.accel);
    CHECK(x.mag == y.mag);
  }

  NoiseGenerator g(99);
  const PositionOutput out = full_position_output(Vec3::Zero());
  double sum = 0.0, sq = 0.0;
  const int n = 100000 / 3 + 1;
  for (int i = 0; i < n; ++i) {
    const PositionOutput o = add_noise(out, spec, g);
    for (int k = 0; k < 3; ++k) {
      sum += o.y[k];
      sq += o.y[k] * o.y[k];
    }
    CHECK(o.c_p == out.c_p);
  }
  const double count = 3.0 * n;
  const double sigma = std::sqrt(sq / count - (sum / count) * (sum / count));
  CHECK(std::abs(sigma - 0.01) < 0.05 * 0.01);
}
