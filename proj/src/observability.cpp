#include "navobs/observability.hpp"

#include "navobs/kernels.hpp"
#include "navobs/riccati.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace navobs {

namespace {

int even_samples(int samples) { return samples % 2 == 0 ? samples : samples + 1; }

double simpson_weight(int k, int n) {
  if (k == 0 || k == n) return 1.0;
  return (k % 2 == 1) ? 4.0 : 2.0;
}

using Integrand3 = std::function<Mat3(double)>;

Mat3 window_average(const Integrand3& f, const PeWindow& w, double t0) {
  const int n = even_samples(w.samples);
  const double h = w.delta / n;
  Mat3 acc = Mat3::Zero();
  for (int k = 0; k <= n; ++k) acc += simpson_weight(k, n) * f(t0 + k * h);
  return (h / 3.0) * acc / w.delta;
}

ObservabilityVerdict sliding_verdict(const Integrand3& f, const Mat3& constant,
                                     const PeWindow& w, double horizon, const char* label) {
  w.validate();
  if (horizon < w.delta)
    throw ContractViolation("observability horizon must be at least one window");
  const double stride = w.delta / 8.0;
  ObservabilityVerdict v;
  v.min_eigenvalue = std::numeric_limits<double>::infinity();
  const auto windows = static_cast<long>(std::floor((horizon - w.delta) / stride + 1e-9)) + 1;
  for (long i = 0; i < windows; ++i) {
    const double t0 = static_cast<double>(i) * stride;
    const Mat3 avg = window_average(f, w, t0) + constant;
    const double lam = Eigen::SelfAdjointEigenSolver<Mat3>(avg, Eigen::EigenvaluesOnly)
                           .eigenvalues()
                           .minCoeff();
    if (lam < v.min_eigenvalue) {
      v.min_eigenvalue = lam;
      v.worst_window_start = t0;
    }
  }
  v.passed = v.min_eigenvalue >= w.mu_threshold;
  v.detail = fmt::format("{}: {} windows of {} s over {} s, worst lambda_min {:.6g} at t={:.6g} "
                         "(threshold {:.6g})",
                         label, windows, w.delta, horizon, v.min_eigenvalue,
                         v.worst_window_start, w.mu_threshold);
  return v;
}

Mat3 altimeter_term(bool on) {
  Mat3 m = Mat3::Zero();
  if (on) m(2, 2) = 1.0;
  return m;
}

}  // namespace

void PeWindow::validate() const {
  if (!(delta > 0.0)) throw ContractViolation("PE window: delta must be positive");
  if (!(mu_threshold > 0.0)) throw ContractViolation("PE window: mu must be positive");
  if (samples < 2) throw ContractViolation("PE window: need at least 2 samples");
}

Mat9 gramian(const OutputMatrixSeries& cp_series, const PeWindow& window, double t0) {
  window.validate();
  const int n = even_samples(window.samples);
  const double h = window.delta / n;
  const auto& kern = kernels::active();
  Mat9 w = Mat9::Zero();
  for (int k = 0; k <= n; ++k) {
    const double s = k * h;
    const MatX c = TranslationalModel::lift(cp_series(t0 + s));
    const MatX g = c * state_transition(s);
    kern.accumulate_gram(g.data(), static_cast<std::size_t>(g.rows()),
                         simpson_weight(k, n) * h / 3.0, w.data());
  }
  return 0.5 * (w + w.transpose());
}

ObservabilityVerdict pe_position(const OutputMatrixSeries& cp_series, const PeWindow& window,
                                 double horizon) {
  const Integrand3 f = [&](double t) -> Mat3 {
    const MatX c = cp_series(t);
    if (c.cols() != 3) throw ContractViolation("pe_position: C_p must have 3 columns");
    return c.transpose() * c;
  };
  return sliding_verdict(f, Mat3::Zero(), window, horizon, "position PE");
}

ObservabilityVerdict range_geometry(const RangeAnchorSet& set, const PeWindow& window,
                                    double horizon) {
  set.validate();
  const Integrand3 f = [&](double t) -> Mat3 {
    const std::size_t n = set.anchors.size();
    Mat3 acc = Mat3::Zero();
    for (std::size_t j = 0; j < n; ++j) {
      Vec3 pbar = Vec3::Zero();
      const Vec3 pj = set.anchor(j, t);
      for (std::size_t i = 0; i < n; ++i) pbar += set.alpha[i] * (set.anchor(i, t) - pj);
      acc += pbar * pbar.transpose();
    }
    return acc;
  };
  return sliding_verdict(f, altimeter_term(set.use_altimeter), window, horizon,
                         "range geometry");
}

ObservabilityVerdict bearing_pe(const BearingCameraSet& set, const PositionSeries& trajectory,
                                const PeWindow& window, double horizon) {
  set.validate();
  const Integrand3 f = [&](double t) -> Mat3 {
    const Vec3 p = trajectory(t);
    Mat3 acc = Mat3::Zero();
    for (std::size_t i = 0; i < set.cameras.size(); ++i) {
      const Vec3 r = p - set.cameras[i].position;
      const double d = r.norm();
      if (!(d >= kBearingStandoff)) throw DegenerateBearing(i, d);
      // R_i y_i is the inertial unit direction from camera to vehicle.
      acc += projector(r / d);
    }
    return acc;
  };
  return sliding_verdict(f, altimeter_term(set.use_altimeter), window, horizon, "bearing PE");
}

bool kalman_observable(const MatX& c_p_const) {
  const MatX c = TranslationalModel::lift(c_p_const);
  const Mat9& a = TranslationalModel::A();
  const Eigen::Index m = c.rows();
  if (m == 0) return false;
  MatX obs(3 * m, 9);
  obs.topRows(m) = c;
  obs.middleRows(m, m) = c * a;
  obs.bottomRows(m) = c * a * a;
  Eigen::JacobiSVD<MatX> svd(obs);
  const auto& sv = svd.singularValues();
  const double tol = std::max<double>(1.0, static_cast<double>(obs.rows())) *
                     std::numeric_limits<double>::epsilon() * 16.0 *
                     std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) rank += sv[i] > tol ? 1 : 0;
  return rank == 9;
}

}  // namespace navobs
