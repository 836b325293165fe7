#include "navobs/observer.hpp"
#include "navobs/trajectory.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <numbers>

using namespace navobs;
using navobs::test::random_vec;

namespace {

ImuSample imu_from(const Rotation& r, const Vec3& a_I, const ObserverParams& p) {
  ImuSample s;
  s.accel = r.matrix().transpose() * a_I;
  s.mag = r.matrix().transpose() * p.m_I;
  return s;
}

Vec9 lifted_truth(const RigidBodyState& x, double g) {
  Vec9 v;
  v << x.p, x.v, x.apparent_acceleration(g);
  return v;
}

}  // namespace

TEST_CASE("sigma2") {
  ObserverParams p;
  SUBCASE("perfect estimates") {
    for (int i = 0; i < 50; ++i) {
      const Rotation r = exp_so3(random_vec(3.0));
      const Vec3 a_I = random_vec(5.0) - 9.81 * Vec3::UnitZ();
      const ImuSample imu = imu_from(r, a_I, p);
      Vec9 x = Vec9::Zero();
      x.tail<3>() = a_I;
      CHECK(sigma2(imu, UnitQuaternion::from_rotation(r), x, p).norm() < 1e-12);
    }
  }
  SUBCASE("magnetometer term only") {
    p.m_I = Vec3::UnitZ();
    p.rho1 = 1.0;
    p.rho2 = 0.0;
    const Rotation r = exp_so3(0.5 * std::numbers::pi * Vec3::UnitY());
    const ImuSample imu = imu_from(r, -9.81 * Vec3::UnitZ(), p);
    const Vec3 expect = (r.matrix().transpose() * Vec3::UnitZ()).cross(Vec3::UnitZ());
    const Vec3 got = sigma2(imu, UnitQuaternion::identity(), Vec9::Zero(), p);
    CHECK((got - expect).norm() < 1e-15);
    CHECK((got - Vec3(0, 1, 0)).norm() < 1e-15);
  }
  SUBCASE("saturation only rescales") {
    const Rotation r = exp_so3(Vec3(0.3, -0.2, 0.1));
    const ImuSample imu = imu_from(r, Vec3(1, 2, -9), p);
    const Vec3 dir = Vec3(0.4, -1.0, 2.0).normalized();
    Vec9 big = Vec9::Zero(), capped = Vec9::Zero();
    big.tail<3>() = 2.0 * p.c2_hat * dir;
    capped.tail<3>() = p.c2_hat * dir;
    const auto q = UnitQuaternion::identity();
    CHECK((sigma2(imu, q, big, p) - sigma2(imu, q, capped, p)).norm() < 1e-13);
  }
  SUBCASE("bounded by rho1 |m|^2 + rho2 |a_B| c2_hat") {
    for (int i = 0; i < 100; ++i) {
      const ImuSample imu = imu_from(exp_so3(random_vec(3.0)), random_vec(30.0), p);
      Vec9 x = Vec9::Zero();
      x.tail<3>() = random_vec(100.0);
      const Vec3 s = sigma2(imu, UnitQuaternion::from_rotation(exp_so3(random_vec(3.0))), x, p);
      CHECK(s.norm() <= p.rho1 * p.m_I.squaredNorm() + p.rho2 * imu.accel.norm() * p.c2_hat + 1e-12);
    }
  }
}

TEST_CASE("sigma1") {
  ObserverParams p;
  ImuSample imu;
  imu.accel = Vec3(0.2, -0.3, 9.0);
  const auto q = UnitQuaternion::from_rotation(exp_so3(Vec3(0.1, 0.2, 0.3)));
  CHECK(sigma1(imu, q, Vec3::Zero(), p).isZero());
  CHECK(sigma1(imu, q, 0.7 * imu.accel, p).norm() < 1e-14);

  imu.accel = Vec3::UnitY();
  const Vec9 s = sigma1(imu, UnitQuaternion::identity(), Vec3::UnitX(), p);
  CHECK(s.head<6>().isZero());
  CHECK((s.tail<3>() - Vec3(0, 0, -2)).norm() < 1e-15);
}

TEST_CASE("reconstruct") {
  ObserverState st;
  ImuSample imu;
  CHECK(reconstruct(st, imu).x_hat().isZero());

  st.z_hat << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  imu.accel = Vec3::UnitX();
  const StateEstimate e = reconstruct(st, imu);
  CHECK(e.p_hat == Vec3(1, 2, 3));
  CHECK(e.v_hat == Vec3(4, 5, 6));
  CHECK(e.a_hat == Vec3(8, 8, 9));

  st.q_hat = UnitQuaternion::from_rotation(exp_so3(Vec3(0.4, -0.5, 1.2)));
  imu.accel = Vec3(0.3, 0.1, -9.7);
  const StateEstimate r = reconstruct(st, imu);
  Vec9 z = r.x_hat();
  z.tail<3>() -= r.R_hat.matrix() * imu.accel;
  CHECK((z - st.z_hat).norm() < 1e-14);
}

TEST_CASE("error_report") {
  RigidBodyState truth;
  truth.p = Vec3(1, 2, 3);
  truth.v = Vec3(-1, 0, 1);
  truth.a = Vec3(0.1, 0.2, 0.3);
  truth.R = exp_so3(Vec3(0.2, 0.1, -0.4));
  const Vec3 bias(0.01, 0.02, 0.03);

  StateEstimate est;
  est.p_hat = truth.p;
  est.v_hat = truth.v;
  est.a_hat = truth.apparent_acceleration(9.81);
  est.R_hat = truth.R;
  est.b_hat = bias;
  const ErrorReport zero = error_report(est, truth, bias, 2.0);
  CHECK(zero.pos_err == 0.0);
  CHECK(zero.vel_err == 0.0);
  CHECK(zero.acc_err == 0.0);
  CHECK(zero.rot_err < 1e-15);
  CHECK(zero.bias_err == 0.0);
  CHECK(zero.zeta_norm == 0.0);

  est.R_hat = truth.R * exp_so3(std::numbers::pi * Vec3::UnitX());
  CHECK(error_report(est, truth, bias, 2.0).rot_err == doctest::Approx(1.0).epsilon(1e-12));

  est.p_hat += Vec3(0.3, 0, 0);
  est.a_hat += Vec3(0, 0.4, 0);
  const ErrorReport g1 = error_report(est, truth, bias, 1.0);
  CHECK(g1.zeta_norm == doctest::Approx(0.5));
  const ErrorReport g2 = error_report(est, truth, bias, 2.0);
  CHECK(g2.zeta_norm == doctest::Approx(std::hypot(0.15, 0.05)));
}

TEST_CASE("observer_step open-loop prediction") {
  ObserverParams p;
  ObserverState st;
  st.z_hat << 1, 2, 3, 0.1, 0.2, 0.3, 0.5, -0.5, 0.25;
  ImuSample imu;
  imu.mag = p.m_I;  // R_hat = I matches, accel = 0: sigma2 = sigma1 = 0
  const double dt = 0.005;
  const WeightSchedule w = WeightSchedule::scaled(3, 1.0, 1.0);
  const ObserverState next = observer_step(st, imu, nullptr, Mat3::Identity(), w, p, dt);

  const Vec9 x = lifted_estimate(st, imu);
  Vec9 expect = st.z_hat + dt * (TranslationalModel::A() * x);
  expect.segment<3>(3) += dt * p.g * Vec3::UnitZ();
  CHECK((next.z_hat - expect).norm() < 1e-15);
  CHECK(next.q_hat == st.q_hat);
  CHECK(next.b_hat == st.b_hat);
  CHECK(next.t == doctest::Approx(dt));
}

TEST_CASE("observer_step rejects mismatched weights") {
  ObserverParams p;
  const PositionOutput out = full_position_output(Vec3(1, 2, 3));
  CHECK_THROWS_AS(observer_step({}, ImuSample{}, out, WeightSchedule::scaled(4, 1.0, 1.0), p, 0.005),
                  ContractViolation);
  CHECK_THROWS_AS(observer_step({}, ImuSample{}, out, WeightSchedule::scaled(3, 1.0, 1.0), p, 0.0),
                  ContractViolation);
}

TEST_CASE("bias on the projection boundary does not grow") {
  ObserverParams p;
  ObserverState st;
  const Vec3 dir = Vec3(1, -2, 0.5).normalized();
  st.b_hat = p.bias_radius() * dir;
  // Attitude error chosen so that -k2 sigma2 points outward.
  for (int i = 0; i < 200; ++i) {
    const Rotation r = exp_so3(random_vec(2.0));
    ImuSample imu = imu_from(r, Vec3(0.5, -1, -9.81), p);
    const Vec9 x = lifted_estimate(st, imu);
    const Vec3 s2 = sigma2(imu, st.q_hat, x, p);
    const ObserverState next = observer_step(st, imu, nullptr, Mat3::Identity(),
                                             WeightSchedule::scaled(3, 1.0, 1.0), p, 0.005);
    if (st.b_hat.dot(-p.k2 * s2) > 0.0) CHECK(next.b_hat.norm() <= st.b_hat.norm() + 1e-15);
    CHECK(next.b_hat.norm() <= p.bias_radius() + 1e-12);
  }
}

TEST_CASE("ObserverParams validation") {
  ObserverParams p;
  CHECK_NOTHROW(p.validate());
  p.gamma = 0.5;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = {};
  p.k1 = 0.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
  p = {};
  p.eps_b = -1.0;
  CHECK_THROWS_AS(p.validate(), ContractViolation);
}

TEST_CASE("exactly initialized observer stays at the equilibrium") {
  const TrajectorySpec spec = TrajectorySpec::circular();
  TruthGenerator truth(spec, 5e-4);
  ObserverParams params;
  const double dt = 0.005;
  const WeightSchedule w = WeightSchedule::scaled(3, 1.0, 1.0);

  const RigidBodyState x0 = truth.at(0.0);
  ObserverState st;
  st.z_hat = lifted_truth(x0, params.g);
  st.z_hat.tail<3>().setZero();  // x_hat = z_hat + B2 R a_B with R a_B = a_I
  st.q_hat = UnitQuaternion::from_rotation(x0.R);
  st.b_hat = spec.bias_true;

  WorldConstants world;
  for (int k = 0; k < 400; ++k) {
    const RigidBodyState x = truth.at(k * dt);
    const ImuSample imu = synth_imu(x, spec.bias_true, world);
    // Analytic fixed point at the true state; the propagated estimate only
    // departs from it by the O(dt) discretization defect.
    CHECK(sigma2(imu, UnitQuaternion::from_rotation(x.R), lifted_truth(x, params.g), params).norm() < 1e-10);
    CHECK(sigma2(imu, st.q_hat, lifted_estimate(st, imu), params).norm() < 1e-3);
    const ErrorReport e = error_report(reconstruct(st, imu), x, spec.bias_true, params.gamma);
    CHECK(e.pos_err < 1e-2);
    CHECK(e.rot_err < 1e-2);
    st = observer_step(st, imu, full_position_output(x.p, x.t), w, params, dt);
  }
  CHECK(std::abs(st.q_hat.norm() - 1.0) < 1e-12);
}
