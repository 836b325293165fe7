#include "navobs/observer.hpp"

#include <string>

namespace navobs {

void ObserverParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ContractViolation(std::string("observer.") + name + ": must be > 0");
  };
  positive(k1, "k1");
  positive(k2, "k2");
  positive(rho1, "rho1");
  positive(rho2, "rho2");
  positive(eps_b, "eps_b");
  positive(c5, "c5");
  positive(c2_hat, "c2_hat");
  positive(g, "g");
  if (!(gamma >= 1.0)) throw ContractViolation("observer.gamma: must be >= 1");
  if (!(m_I.norm() > 0.0)) throw ContractViolation("world.m_I: must be nonzero");
}

Vec9 lifted_estimate(const ObserverState& st, const ImuSample& imu) {
  const Mat3 r_hat = quat_to_rot(st.q_hat).matrix();
  Vec9 x = st.z_hat;
  x.tail<3>() += r_hat * imu.accel;
  return x;
}

Vec3 sigma2(const ImuSample& imu, const UnitQuaternion& q_hat, const Vec9& x_hat,
            const ObserverParams& params) {
  const Mat3 rt = quat_to_rot(q_hat).matrix().transpose();
  const Vec3 a_sat = sat(params.c2_hat, Vec3(x_hat.tail<3>()));
  return params.rho1 * imu.mag.cross(rt * params.m_I) +
         params.rho2 * imu.accel.cross(rt * a_sat);
}

Vec9 sigma1(const ImuSample& imu, const UnitQuaternion& q_hat, const Vec3& s2,
            const ObserverParams& params) {
  Vec9 s = Vec9::Zero();
  s.tail<3>() = -params.k1 * (quat_to_rot(q_hat).matrix() * s2.cross(imu.accel));
  return s;
}

ObserverState observer_step(const ObserverState& st, const ImuSample& imu,
                            const PositionOutput* out, const MatX& held_c_p,
                            const WeightSchedule& weights, const ObserverParams& params,
                            double dt) {
  if (!(dt > 0.0)) throw ContractViolation("observer_step: dt must be positive");
  const MatX& c_p = out != nullptr ? out->c_p : held_c_p;
  if (c_p.rows() != weights.Q.rows())
    throw ContractViolation("observer_step: C_p has " + std::to_string(c_p.rows()) +
                            " rows but Q is " + std::to_string(weights.Q.rows()) + "x" +
                            std::to_string(weights.Q.cols()));

  const TranslationalModel model(params.gamma);
  const Vec9 x_hat = lifted_estimate(st, imu);
  const Vec3 s2 = sigma2(imu, st.q_hat, x_hat, params);
  const Vec9 s1 = sigma1(imu, st.q_hat, s2, params);

  const MatX c = TranslationalModel::lift(c_p);
  ObserverState next;
  next.riccati = cdre_step(st.riccati, model, c, weights, dt, params.integrator);

  Vec9 z_dot = TranslationalModel::A() * x_hat + s1;
  z_dot.segment<3>(3) += params.g * Vec3::UnitZ();
  if (out != nullptr) {
    const MatX k = gain(next.riccati, model, c, weights.Q);
    z_dot += k * (out->y - c * x_hat);
  }
  next.z_hat = st.z_hat + dt * z_dot;

  const Vec3 w_hat = imu.gyro - st.b_hat + params.k1 * s2;
  next.q_hat = quat_step(st.q_hat, w_hat, dt);

  Vec3 b = st.b_hat + dt * smooth_projection(params.c5, params.eps_b, st.b_hat,
                                             -params.k2 * s2);
  // Euler can overshoot the continuous-time invariant ball.
  const double radius = params.bias_radius();
  const double bn = b.norm();
  if (bn > radius) b *= radius / bn;
  next.b_hat = b;
  next.t = st.t + dt;
  return next;
}

StateEstimate reconstruct(const ObserverState& st, const ImuSample& imu) {
  const Vec9 x = lifted_estimate(st, imu);
  StateEstimate e;
  e.p_hat = x.head<3>();
  e.v_hat = x.segment<3>(3);
  e.a_hat = x.tail<3>();
  e.R_hat = quat_to_rot(st.q_hat);
  e.b_hat = st.b_hat;
  return e;
}

ErrorReport error_report(const StateEstimate& est, const RigidBodyState& truth,
                         const Vec3& true_bias, double gamma, double g) {
  Vec9 x;
  x << truth.p, truth.v, truth.apparent_acceleration(g);
  const Vec9 x_err = x - est.x_hat();
  const TranslationalModel model(gamma);

  ErrorReport r;
  r.pos_err = x_err.head<3>().norm();
  r.vel_err = x_err.segment<3>(3).norm();
  r.acc_err = x_err.tail<3>().norm();
  r.rot_err = rot_distance(truth.R * est.R_hat.transpose());
  r.bias_err = (true_bias - est.b_hat).norm();
  r.zeta_norm = (model.L_gamma_inverse() * x_err).norm();
  return r;
}

}  // namespace navobs
