#pragma once

// Observability Gramians and windowed persistency-of-excitation checks for
// each sensor suite.

#include "navobs/sensors.hpp"
#include "navobs/types.hpp"

#include <functional>
#include <string>

namespace navobs {

struct PeWindow {
  double delta = 2.0;          // s
  double mu_threshold = 2e-4;  // compared against (1/delta) * integral
  int samples = 256;           // Simpson subintervals, rounded up to even

  /// Window of length delta with the default threshold 1e-4 * delta.
  static PeWindow with_delta(double delta, int samples = 256) {
    return {delta, 1e-4 * delta, samples};
  }
  void validate() const;
};

struct ObservabilityVerdict {
  bool passed = false;
  double min_eigenvalue = 0.0;
  double worst_window_start = 0.0;
  std::string detail;
};

using OutputMatrixSeries = std::function<MatX(double)>;
using PositionSeries = std::function<Vec3(double)>;

/// W(t0, t0 + delta) = int Phi^T C^T C Phi ds with C = [C_p 0 0], by
/// composite Simpson quadrature.
Mat9 gramian(const OutputMatrixSeries& cp_series, const PeWindow& window, double t0);

/// Worst sliding window of (1/delta) int C_p^T C_p ds over [0, horizon],
/// stride delta / 8.
ObservabilityVerdict pe_position(const OutputMatrixSeries& cp_series, const PeWindow& window,
                                 double horizon);

/// Range-anchor condition: (1/delta) int sum pbar_i pbar_i^T ds + alpha e3 e3^T.
ObservabilityVerdict range_geometry(const RangeAnchorSet& set, const PeWindow& window,
                                    double horizon);

/// Bearing condition: (1/delta) int sum Pi(R_i y_i) ds + alpha e3 e3^T, with
/// the vehicle following `trajectory`. Throws DegenerateBearing when the
/// trajectory passes through a camera center.
ObservabilityVerdict bearing_pe(const BearingCameraSet& set, const PositionSeries& trajectory,
                                const PeWindow& window, double horizon);

/// rank [C; C A; C A^2] == 9 for the lifted constant C_p.
bool kalman_observable(const MatX& c_p_const);

}  // namespace navobs
