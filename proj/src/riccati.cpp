#include "navobs/riccati.hpp"

#include "navobs/kernels.hpp"
#include "navobs/observability.hpp"

#include <cmath>
#include <string>

namespace navobs {

namespace {

Mat9 make_a() {
  Mat9 a = Mat9::Zero();
  a.block<3, 3>(0, 3).setIdentity();
  a.block<3, 3>(3, 6).setIdentity();
  return a;
}

Eigen::Matrix<double, 9, 3> selector(int block) {
  Eigen::Matrix<double, 9, 3> b = Eigen::Matrix<double, 9, 3>::Zero();
  b.block<3, 3>(3 * block, 0).setIdentity();
  return b;
}

Mat9 symmetrized(const Mat9& p) { return 0.5 * (p + p.transpose()); }

// Solves F X + X F^T + S = 0 through the 81x81 Kronecker system.
Mat9 solve_lyapunov(const Mat9& f, const Mat9& s) {
  constexpr int n = 9;
  MatX k = MatX::Zero(n * n, n * n);
  const Mat9 eye = Mat9::Identity();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // vec(F X) = (I kron F) vec X ; vec(X F^T) = (F kron I) vec X
      k.block(i * n, j * n, n, n) += eye(i, j) * f + f(i, j) * eye;
    }
  }
  const VecX rhs = -Eigen::Map<const VecX>(s.data(), n * n);
  VecX x = k.partialPivLu().solve(rhs);
  return symmetrized(Eigen::Map<Mat9>(x.data()));
}

}  // namespace

TranslationalModel::TranslationalModel(double gamma) : gamma_(gamma) {
  if (!(gamma >= 1.0)) throw ContractViolation("gamma must be >= 1");
}

const Mat9& TranslationalModel::A() {
  static const Mat9 a = make_a();
  return a;
}

const Eigen::Matrix<double, 9, 3>& TranslationalModel::B1() {
  static const Eigen::Matrix<double, 9, 3> b = selector(1);
  return b;
}

const Eigen::Matrix<double, 9, 3>& TranslationalModel::B2() {
  static const Eigen::Matrix<double, 9, 3> b = selector(2);
  return b;
}

Mat9 TranslationalModel::L_gamma() const {
  Vec9 d;
  d << Vec3::Constant(gamma_), Vec3::Constant(gamma_ * gamma_),
      Vec3::Constant(gamma_ * gamma_ * gamma_);
  return d.asDiagonal();
}

Mat9 TranslationalModel::L_gamma_inverse() const {
  Vec9 d;
  d << Vec3::Constant(1.0 / gamma_), Vec3::Constant(1.0 / (gamma_ * gamma_)),
      Vec3::Constant(1.0 / (gamma_ * gamma_ * gamma_));
  return d.asDiagonal();
}

MatX TranslationalModel::lift(const MatX& c_p) {
  if (c_p.cols() != 3) throw ContractViolation("output matrix C_p must have 3 columns");
  MatX c = MatX::Zero(c_p.rows(), 9);
  c.leftCols<3>() = c_p;
  return c;
}

Mat9 riccati_rhs(const Mat9& P, const Mat9& ctqc, const Mat9& V, double gamma) {
  Mat9 out;
  kernels::active().riccati_rhs(P.data(), ctqc.data(), V.data(), gamma, out.data());
  return out;
}

double min_eigenvalue(const MatX& sym) {
  Eigen::SelfAdjointEigenSolver<MatX> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

RiccatiState cdre_step(const RiccatiState& rs, const TranslationalModel& model,
                       const MatX& c, const WeightSchedule& w, double dt,
                       RiccatiIntegrator integrator) {
  if (!(dt > 0.0)) throw ContractViolation("cdre_step: dt must be positive");
  if (c.cols() != 9) throw ContractViolation("cdre_step: C must be lifted to 9 columns");
  if (w.Q.rows() != c.rows() || w.Q.cols() != c.rows())
    throw ContractViolation("cdre_step: Q is " + std::to_string(w.Q.rows()) + "x" +
                            std::to_string(w.Q.cols()) + " but C has " +
                            std::to_string(c.rows()) + " rows");

  const Mat9 m = c.transpose() * w.Q * c;
  const double g = model.gamma();
  const Mat9& p = rs.P;

  Mat9 next;
  if (integrator == RiccatiIntegrator::euler) {
    next = p + dt * riccati_rhs(p, m, w.V, g);
  } else {
    const Mat9 k1 = riccati_rhs(p, m, w.V, g);
    const Mat9 k2 = riccati_rhs(p + 0.5 * dt * k1, m, w.V, g);
    const Mat9 k3 = riccati_rhs(p + 0.5 * dt * k2, m, w.V, g);
    const Mat9 k4 = riccati_rhs(p + dt * k3, m, w.V, g);
    next = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  next = symmetrized(next);

  // Eigenvalues are only computed when the Cholesky factorization fails.
  if (!next.allFinite() || next.llt().info() != Eigen::Success) {
    const double lam = next.allFinite() ? min_eigenvalue(next) : std::nan("");
    throw RiccatiError("Riccati solution lost positive definiteness at t=" +
                           std::to_string(rs.t + dt) +
                           " (min eigenvalue " + std::to_string(lam) + ")",
                       lam);
  }
  return {next, rs.t + dt};
}

double care_residual(const Mat9& P, const MatX& c_p, const WeightSchedule& w) {
  const MatX c = TranslationalModel::lift(c_p);
  const Mat9 m = c.transpose() * w.Q * c;
  const Mat9& a = TranslationalModel::A();
  return (a * P + P * a.transpose() - P * m * P + w.V).norm();
}

Mat9 care_solve(const MatX& c_p, const WeightSchedule& w) {
  if (!kalman_observable(c_p))
    throw RiccatiError("care_solve: (A, C) is not Kalman observable (rank C_p < 3)", 0.0);
  const MatX c = TranslationalModel::lift(c_p);
  if (w.Q.rows() != c.rows()) throw ContractViolation("care_solve: Q/C dimension mismatch");
  const Mat9 m = c.transpose() * w.Q * c;
  const Mat9& a = TranslationalModel::A();
  const double v_norm = w.V.norm();

  // Seed: integrate the gamma = 1 differential equation towards its
  // stationary point so the first Newton closed loop is stable.
  const TranslationalModel unit(1.0);
  RiccatiState rs{w.V, 0.0};
  double dt = 0.05;
  for (int step = 0; step < 200000; ++step) {
    if (riccati_rhs(rs.P, m, w.V, 1.0).norm() <= 1e-6 * v_norm) break;
    try {
      rs = cdre_step(rs, unit, c, w, dt);
    } catch (const RiccatiError&) {
      dt *= 0.5;
      if (dt < 1e-8) throw;
    }
  }

  Mat9 p = rs.P;
  double residual = care_residual(p, c_p, w);
  for (int it = 0; it < 200 && residual > 1e-10 * v_norm; ++it) {
    const Mat9 f = a - p * m;
    p = solve_lyapunov(f, p * m * p + w.V);
    residual = care_residual(p, c_p, w);
  }
  if (residual > 1e-8 * v_norm || p.llt().info() != Eigen::Success)
    throw RiccatiError("care_solve: Newton iteration did not converge (residual " +
                           std::to_string(residual) + ")",
                       residual);
  return p;
}

MatX gain(const RiccatiState& rs, const TranslationalModel& model, const MatX& c,
          const MatX& q) {
  if (c.cols() != 9 || q.rows() != c.rows() || q.cols() != c.rows())
    throw ContractViolation("gain: dimension mismatch");
  return model.L_gamma() * rs.P * c.transpose() * q;
}

Mat9 state_transition(double dt) {
  const Mat9& a = TranslationalModel::A();
  return Mat9::Identity() + dt * a + (0.5 * dt * dt) * (a * a);
}

}  // namespace navobs
