#pragma once

// Nonlinear navigation observer: a Riccati-gain high-gain estimator for
// x = [p; v; a_I] coupled with a complementary attitude filter (run on unit
// quaternions) and a projected gyro-bias estimator.

#include "navobs/riccati.hpp"
#include "navobs/sensors.hpp"
#include "navobs/so3.hpp"

namespace navobs {

struct ObserverParams {
  double k1 = 2.0;
  double k2 = 1.0;
  double rho1 = 1.0;
  double rho2 = 0.1;
  double eps_b = 0.001;   // projection margin
  double c5 = 0.06;       // bias norm bound, rad/s
  double c2_hat = 15.0;   // saturation level for the estimated a_I
  double gamma = 2.0;
  Vec3 m_I = Vec3(0.033, 0.1, 0.49);
  double g = 9.81;
  RiccatiIntegrator integrator = RiccatiIntegrator::rk4;

  /// Throws ContractViolation on non-positive gains or gamma < 1.
  void validate() const;
  double bias_radius() const { return c5 + eps_b; }
};

struct ObserverState {
  Vec9 z_hat = Vec9::Zero();
  UnitQuaternion q_hat;
  Vec3 b_hat = Vec3::Zero();
  RiccatiState riccati;
  double t = 0.0;
};

struct StateEstimate {
  Vec3 p_hat = Vec3::Zero();
  Vec3 v_hat = Vec3::Zero();
  Vec3 a_hat = Vec3::Zero();
  Rotation R_hat;
  Vec3 b_hat = Vec3::Zero();

  Vec9 x_hat() const {
    Vec9 x;
    x << p_hat, v_hat, a_hat;
    return x;
  }
};

struct ErrorReport {
  double pos_err = 0.0;
  double vel_err = 0.0;
  double acc_err = 0.0;
  double rot_err = 0.0;
  double bias_err = 0.0;
  double zeta_norm = 0.0;
};

/// x_hat = z_hat + B2 R_hat a_B
Vec9 lifted_estimate(const ObserverState& st, const ImuSample& imu);

/// Attitude/bias innovation from magnetometer and acceleration mismatch.
Vec3 sigma2(const ImuSample& imu, const UnitQuaternion& q_hat, const Vec9& x_hat,
            const ObserverParams& params);

/// Translational coupling term; only the acceleration block is nonzero.
Vec9 sigma1(const ImuSample& imu, const UnitQuaternion& q_hat, const Vec3& s2,
            const ObserverParams& params);

/// Advance the observer by dt. When `out` is null the position innovation is
/// held at zero for this step (decimated position sensor) while P keeps
/// propagating with `held_c_p`.
///
/// Order within a step: reconstruct x_hat from the current state, evaluate
/// sigma2 and sigma1, advance P one Riccati step, form K from the advanced
/// P, then forward-Euler z_hat, closed-form quaternion update, and the
/// projected Euler bias update with a radial clamp at c5 + eps_b.
ObserverState observer_step(const ObserverState& st, const ImuSample& imu,
                            const PositionOutput* out, const MatX& held_c_p,
                            const WeightSchedule& weights, const ObserverParams& params,
                            double dt);

inline ObserverState observer_step(const ObserverState& st, const ImuSample& imu,
                                   const PositionOutput& out, const WeightSchedule& weights,
                                   const ObserverParams& params, double dt) {
  return observer_step(st, imu, &out, out.c_p, weights, params, dt);
}

StateEstimate reconstruct(const ObserverState& st, const ImuSample& imu);

/// Error norms against truth; zeta_norm = |L_gamma^{-1} (x - x_hat)|.
ErrorReport error_report(const StateEstimate& est, const RigidBodyState& truth,
                         const Vec3& true_bias, double gamma, double g = 9.81);

}  // namespace navobs
