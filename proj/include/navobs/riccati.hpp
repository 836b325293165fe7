#pragma once

// Time-scaled Riccati gain design for the lifted translational model
// x = [p; v; a_I], x' = A x + B1 g e3 + B2 jerk.

#include "navobs/types.hpp"

#include <cstdint>

namespace navobs {

/// Constant triple-integrator structure plus the high-gain scaling gamma.
class TranslationalModel {
 public:
  explicit TranslationalModel(double gamma = 1.0);

  double gamma() const { return gamma_; }

  static const Mat9& A();
  static const Eigen::Matrix<double, 9, 3>& B1();
  static const Eigen::Matrix<double, 9, 3>& B2();
  /// blockdiag(gamma I, gamma^2 I, gamma^3 I)
  Mat9 L_gamma() const;
  Mat9 L_gamma_inverse() const;

  /// [C_p 0 0], m x 9.
  static MatX lift(const MatX& c_p);

 private:
  double gamma_;
};

struct RiccatiState {
  Mat9 P = Mat9::Identity();
  double t = 0.0;
};

/// Q is m x m, V is 9 x 9; both symmetric positive definite.
struct WeightSchedule {
  MatX Q;
  Mat9 V = Mat9::Identity();

  static WeightSchedule scaled(Eigen::Index m, double q, double v) {
    return {q * MatX::Identity(m, m), v * Mat9::Identity()};
  }
};

enum class RiccatiIntegrator { rk4, euler };

/// Right-hand side gamma (A P + P A^T - P C^T Q C P + V), via the active
/// kernel table.
Mat9 riccati_rhs(const Mat9& P, const Mat9& ctqc, const Mat9& V, double gamma);

/// Advances P by dt. `c` is the lifted m x 9 output matrix. The result is
/// symmetrized and checked for positive definiteness; failure throws
/// RiccatiError carrying the smallest eigenvalue.
RiccatiState cdre_step(const RiccatiState& rs, const TranslationalModel& model,
                       const MatX& c, const WeightSchedule& w, double dt,
                       RiccatiIntegrator integrator = RiccatiIntegrator::rk4);

/// Stabilizing solution of A P + P A^T - P C^T Q C P + V = 0 for constant
/// C_p (m x 3, not lifted). Throws RiccatiError when (A, C) is not Kalman
/// observable or Newton iterations do not reach the residual target.
Mat9 care_solve(const MatX& c_p, const WeightSchedule& w);

/// Frobenius norm of the algebraic Riccati residual.
double care_residual(const Mat9& P, const MatX& c_p, const WeightSchedule& w);

/// K = L_gamma P C^T Q, 9 x m.
MatX gain(const RiccatiState& rs, const TranslationalModel& model, const MatX& c,
          const MatX& q);

/// Phi(dt) = I + A dt + A^2 dt^2 / 2 (A is nilpotent of index 3).
Mat9 state_transition(double dt);

/// Smallest eigenvalue of a symmetric matrix.
double min_eigenvalue(const MatX& sym);

}  // namespace navobs
