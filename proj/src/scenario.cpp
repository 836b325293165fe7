#include "navobs/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace navobs {

std::string_view to_string(SensorSuite s) {
  switch (s) {
    case SensorSuite::full_position: return "full_position";
    case SensorSuite::ranges: return "ranges";
    case SensorSuite::bearings: return "bearings";
  }
  return "full_position";
}

SensorSuite sensor_suite_from_string(std::string_view s) {
  if (s == "full_position") return SensorSuite::full_position;
  if (s == "ranges") return SensorSuite::ranges;
  if (s == "bearings") return SensorSuite::bearings;
  throw ContractViolation("unknown sensor suite '" + std::string(s) + "'");
}

std::string_view to_string(Metric m) {
  switch (m) {
    case Metric::position: return "position";
    case Metric::velocity: return "velocity";
    case Metric::acceleration: return "acceleration";
    case Metric::rotation: return "rotation";
    case Metric::bias: return "bias";
    case Metric::zeta: return "zeta";
  }
  return "position";
}

Metric metric_from_string(std::string_view s) {
  for (Metric m : {Metric::position, Metric::velocity, Metric::acceleration, Metric::rotation,
                   Metric::bias, Metric::zeta}) {
    if (to_string(m) == s) return m;
  }
  throw ContractViolation("unknown metric '" + std::string(s) + "'");
}

namespace {

Vec3 vec(const Array3& a) { return {a[0], a[1], a[2]}; }

MatX weight_matrix(const WeightConfig& w, Eigen::Index n, const char* name) {
  MatX m;
  if (w.matrix.empty()) {
    if (!(w.scale > 0.0)) throw ContractViolation(fmt::format("observer.{}: scale must be > 0", name));
    m = w.scale * MatX::Identity(n, n);
  } else {
    if (static_cast<Eigen::Index>(w.matrix.size()) != n)
      throw ContractViolation(fmt::format("observer.{}: expected {}x{} matrix for this sensor suite",
                                          name, n, n));
    m.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& row = w.matrix[static_cast<std::size_t>(i)];
      if (static_cast<Eigen::Index>(row.size()) != n)
        throw ContractViolation(fmt::format("observer.{}: row {} has wrong length", name, i));
      for (Eigen::Index j = 0; j < n; ++j) m(i, j) = row[static_cast<std::size_t>(j)];
    }
    if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm()))
      throw ContractViolation(fmt::format("observer.{}: matrix must be symmetric", name));
  }
  if (m.llt().info() != Eigen::Success)
    throw ContractViolation(fmt::format("observer.{}: matrix must be positive definite", name));
  return m;
}

Rotation camera_orientation(const CameraConfig& c, std::size_t i) {
  if (c.quaternion && c.look_at)
    throw ContractViolation(fmt::format("sensors.cameras[{}]: give quaternion or look_at, not both", i));
  if (c.look_at) return look_at_camera(vec(c.position), vec(*c.look_at)).orientation;
  if (c.quaternion) {
    const auto& q = *c.quaternion;
    return quat_to_rot(UnitQuaternion::normalized(q[0], q[1], q[2], q[3]));
  }
  return Rotation::identity();
}

TrajectorySpec build_trajectory(const TrajectoryConfig& tc) {
  TrajectorySpec spec;
  switch (tc.kind) {
    case TrajectoryKind::circular: spec = TrajectorySpec::circular(); break;
    case TrajectoryKind::eight: spec = TrajectorySpec::eight(); break;
    case TrajectoryKind::lemniscate: spec = TrajectorySpec::lemniscate(); break;
    case TrajectoryKind::custom_harmonic:
      spec.kind = TrajectoryKind::custom_harmonic;
      spec.position = tc.position;
      spec.omega = reference_angular_velocity();
      spec.R0 = exp_so3(0.5 * 3.14159265358979323846 * Vec3::UnitY());
      break;
  }
  if (tc.omega) spec.omega = *tc.omega;
  if (tc.r0_rotvec) spec.R0 = exp_so3(vec(*tc.r0_rotvec));
  spec.bias_true = vec(tc.bias_deg_s) * kDegToRad;
  return spec;
}

}  // namespace

Eigen::Index Scenario::output_rows() const {
  if (const auto* r = std::get_if<RangeAnchorSet>(&sensors))
    return static_cast<Eigen::Index>(r->anchors.size()) + (r->use_altimeter ? 1 : 0);
  if (const auto* b = std::get_if<BearingCameraSet>(&sensors))
    return 3 * static_cast<Eigen::Index>(b->cameras.size()) + (b->use_altimeter ? 1 : 0);
  return 3;
}

Scenario build_scenario(const ScenarioConfig& cfg) {
  Scenario sc;
  const auto& ic = cfg.integration;
  if (!(ic.dt > 0.0)) throw ContractViolation("integration.dt: must be > 0");
  if (!(ic.duration >= 0.0)) throw ContractViolation("integration.duration: must be >= 0");
  if (ic.position_decimation < 1)
    throw ContractViolation("integration.position_decimation: must be >= 1");
  sc.dt = ic.dt;
  sc.duration = ic.duration;
  sc.decimation = ic.position_decimation;

  sc.trajectory = build_trajectory(cfg.trajectory);
  sc.world.g = cfg.world.g;
  sc.world.m_I = vec(cfg.world.m_I);
  if (!(sc.world.g > 0.0)) throw ContractViolation("world.g: must be > 0");
  if (!(sc.world.m_I.norm() > 0.0)) throw ContractViolation("world.m_I: must be nonzero");

  const auto& s = cfg.sensors;
  switch (s.suite) {
    case SensorSuite::full_position:
      if (s.altimeter) throw ContractViolation("sensors.altimeter: not meaningful with full_position");
      break;
    case SensorSuite::ranges: {
      if (s.anchors.empty()) throw ContractViolation("sensors.anchors: at least one anchor required");
      std::vector<Vec3> anchors;
      for (const auto& a : s.anchors) anchors.push_back(vec(a));
      RangeAnchorSet set = RangeAnchorSet::uniform(std::move(anchors), s.altimeter);
      if (!s.alpha.empty()) {
        if (s.alpha.size() != s.anchors.size())
          throw ContractViolation("sensors.alpha: length must match anchors");
        set.alpha = s.alpha;
      }
      try {
        set.validate();
      } catch (const ContractViolation& e) {
        throw ContractViolation(std::string("sensors: ") + e.what());
      }
      sc.sensors = std::move(set);
      break;
    }
    case SensorSuite::bearings: {
      if (s.cameras.empty()) throw ContractViolation("sensors.cameras: at least one camera required");
      BearingCameraSet set;
      set.use_altimeter = s.altimeter;
      for (std::size_t i = 0; i < s.cameras.size(); ++i)
        set.cameras.push_back({vec(s.cameras[i].position), camera_orientation(s.cameras[i], i)});
      sc.sensors = std::move(set);
      break;
    }
  }

  const auto& oc = cfg.observer;
  ObserverParams& p = sc.params;
  p.k1 = oc.k1;
  p.k2 = oc.k2;
  p.rho1 = oc.rho1;
  p.rho2 = oc.rho2;
  p.eps_b = oc.eps_b;
  p.c5 = oc.c5;
  p.c2_hat = oc.c2_hat;
  p.gamma = oc.gamma;
  p.m_I = sc.world.m_I;
  p.g = sc.world.g;
  if (oc.riccati_integrator == "rk4") {
    p.integrator = RiccatiIntegrator::rk4;
  } else if (oc.riccati_integrator == "euler") {
    p.integrator = RiccatiIntegrator::euler;
  } else {
    throw ContractViolation("observer.riccati_integrator: expected rk4 or euler");
  }
  p.validate();

  sc.weights.Q = weight_matrix(oc.Q, sc.output_rows(), "Q");
  sc.weights.V = weight_matrix(oc.V, 9, "V");
  if (!(oc.p0 > 0.0)) throw ContractViolation("observer.p0: must be > 0");

  ObserverState& st = sc.initial;
  for (int i = 0; i < 9; ++i) st.z_hat[i] = oc.z0[static_cast<std::size_t>(i)];
  st.q_hat = UnitQuaternion::normalized(oc.q0[0], oc.q0[1], oc.q0[2], oc.q0[3]);
  st.b_hat = vec(oc.b0);
  if (st.b_hat.norm() > p.bias_radius())
    throw ContractViolation("observer.b0: must lie inside the ball of radius c5 + eps_b");
  st.riccati = {oc.p0 * Mat9::Identity(), 0.0};

  const auto& n = cfg.noise;
  if (n.gyro < 0.0 || n.accel < 0.0 || n.mag < 0.0 || n.output < 0.0)
    throw ContractViolation("noise: standard deviations must be >= 0");
  sc.noise = {n.gyro, n.accel, n.mag, n.output};
  sc.seed = n.seed;

  const auto& th = cfg.thresholds;
  for (double v : {th.position, th.velocity, th.acceleration, th.rotation, th.bias_deg_s, th.zeta})
    if (!(v > 0.0)) throw ContractViolation("thresholds: all thresholds must be > 0");

  const auto& ob = cfg.observability;
  sc.window = PeWindow{ob.delta, ob.mu.value_or(1e-4 * ob.delta), ob.samples};
  sc.window.validate();
  sc.horizon = std::max(ob.horizon.value_or(sc.duration), sc.window.delta);

  if (cfg.output.format != "csv" && cfg.output.format != "jsonl")
    throw ContractViolation("output.format: expected csv or jsonl");
  return sc;
}

PositionOutput measure(const Scenario& sc, const Vec3& p, double t) {
  if (const auto* r = std::get_if<RangeAnchorSet>(&sc.sensors)) return range_output(p, *r, t);
  if (const auto* b = std::get_if<BearingCameraSet>(&sc.sensors)) return bearing_output(p, *b, t);
  return full_position_output(p, t);
}

ObservabilityVerdict check_observability(const Scenario& sc) {
  if (const auto* r = std::get_if<RangeAnchorSet>(&sc.sensors))
    return range_geometry(*r, sc.window, sc.horizon);
  if (const auto* b = std::get_if<BearingCameraSet>(&sc.sensors)) {
    TruthGenerator gen(sc.trajectory);
    return bearing_pe(*b, [&gen](double t) { return gen.position(t); }, sc.window, sc.horizon);
  }
  return pe_position([](double) -> MatX { return Mat3::Identity(); }, sc.window, sc.horizon);
}

std::optional<double> settling_time(const std::vector<double>& t,
                                    const std::vector<double>& series, double threshold) {
  if (series.empty()) return std::nullopt;
  std::size_t i = series.size();
  while (i > 0 && series[i - 1] < threshold) --i;
  if (i == series.size()) return std::nullopt;
  return t[i];
}

namespace {

double metric_value(const ErrorReport& e, Metric m) {
  switch (m) {
    case Metric::position: return e.pos_err;
    case Metric::velocity: return e.vel_err;
    case Metric::acceleration: return e.acc_err;
    case Metric::rotation: return e.rot_err;
    case Metric::bias: return e.bias_err;
    case Metric::zeta: return e.zeta_norm;
  }
  return 0.0;
}

double metric_threshold(const ThresholdConfig& th, Metric m) {
  switch (m) {
    case Metric::position: return th.position;
    case Metric::velocity: return th.velocity;
    case Metric::acceleration: return th.acceleration;
    case Metric::rotation: return th.rotation;
    case Metric::bias: return th.bias_deg_s * kDegToRad;
    case Metric::zeta: return th.zeta;
  }
  return 0.0;
}

RunSummary summarize(const RunResult& r, const Scenario& sc, double max_accel) {
  RunSummary s;
  s.max_apparent_accel = max_accel;
  std::vector<double> t;
  t.reserve(r.samples.size());
  for (const auto& x : r.samples) t.push_back(x.t);
  const double tail_start = 0.8 * r.duration;

  for (int mi = 0; mi < 6; ++mi) {
    const auto m = static_cast<Metric>(mi);
    MetricSummary& ms = s.metrics[static_cast<std::size_t>(mi)];
    ms.threshold = metric_threshold(r.config.thresholds, m);
    std::vector<double> v;
    v.reserve(r.samples.size());
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& x : r.samples) {
      const double val = metric_value(x.err, m);
      v.push_back(val);
      if (x.t >= tail_start) {
        sum += val;
        ++count;
        ms.final_window_max = std::max(ms.final_window_max, val);
      }
    }
    ms.steady_state_mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    ms.settling_time = settling_time(t, v, ms.threshold);
  }

  if (!r.samples.empty()) {
    s.p_eig_min = r.samples.front().p_eig_min;
    s.p_eig_max = r.samples.front().p_eig_max;
  }
  for (const auto& x : r.samples) {
    s.p_eig_min = std::min(s.p_eig_min, x.p_eig_min);
    s.p_eig_max = std::max(s.p_eig_max, x.p_eig_max);
    s.max_sigma2 = std::max(s.max_sigma2, x.sigma2_norm);
  }

  if (s.max_apparent_accel >= sc.params.c2_hat) {
    s.warnings.push_back(fmt::format("max |a_I| = {:.4g} exceeds the saturation level c2_hat = {:.4g}",
                                     s.max_apparent_accel, sc.params.c2_hat));
  }
  const double loop_gain =
      sc.params.k1 *
      (sc.params.rho1 * sc.world.m_I.squaredNorm() + sc.params.rho2 * max_accel * max_accel) * sc.dt;
  if (loop_gain > 2.0) {
    s.warnings.push_back(fmt::format(
        "attitude feedback gain k1(rho1|m_I|^2 + rho2|a_I|^2) dt = {:.3g} exceeds the explicit-step limit 2",
        loop_gain));
  }
  if (sc.trajectory.bias_true.norm() > sc.params.c5) {
    s.warnings.push_back(fmt::format("true gyro bias norm {:.6g} rad/s exceeds c5 = {:.6g}",
                                     sc.trajectory.bias_true.norm(), sc.params.c5));
  }
  if (!r.verdict.passed) s.warnings.push_back("observability check failed: " + r.verdict.detail);
  return s;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg) {
  const Scenario sc = build_scenario(cfg);
  RunResult result;
  result.config = cfg;
  result.dt = sc.dt;
  result.duration = sc.duration;
  result.verdict = check_observability(sc);

  TruthGenerator truth(sc.trajectory, sc.dt / 10.0);
  NoiseGenerator rng(sc.seed);
  const bool noisy = !sc.noise.is_zero();
  const auto steps = static_cast<long>(std::llround(sc.duration / sc.dt));
  result.samples.reserve(static_cast<std::size_t>(std::max(0L, steps)));

  ObserverState st = sc.initial;
  MatX held_c_p;
  double max_accel = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * sc.dt;
    const RigidBodyState x = truth.at(t);
    max_accel = std::max(max_accel, x.apparent_acceleration(sc.world.g).norm());
    ImuSample imu = synth_imu(x, sc.trajectory.bias_true, sc.world);
    if (noisy) imu = add_noise(imu, sc.noise, rng);

    const bool sample_position = (k % sc.decimation) == 0;
    std::optional<PositionOutput> out;
    try {
      if (sample_position) {
        out = measure(sc, x.p, t);
        if (noisy) out = add_noise(*out, sc.noise, rng);
        held_c_p = out->c_p;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("step {} (t={:.6g}): measurement failed: {}", k, t, e.what()));
    }

    RunSample rs;
    rs.t = t;
    rs.est = reconstruct(st, imu);
    rs.q_hat = st.q_hat;
    rs.err = error_report(rs.est, x, sc.trajectory.bias_true, sc.params.gamma, sc.world.g);
    rs.p_true = x.p;
    rs.sigma2_norm = sigma2(imu, st.q_hat, rs.est.x_hat(), sc.params).norm();
    const Eigen::SelfAdjointEigenSolver<Mat9> es(st.riccati.P, Eigen::EigenvaluesOnly);
    rs.p_eig_min = es.eigenvalues().minCoeff();
    rs.p_eig_max = es.eigenvalues().maxCoeff();
    result.samples.push_back(rs);

    try {
      st = observer_step(st, imu, out ? &*out : nullptr, held_c_p, sc.weights, sc.params, sc.dt);
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("step {} (t={:.6g}): observer failed: {}", k, t, e.what()));
    }
  }

  result.summary = summarize(result, sc, max_accel);
  return result;
}

Comparison compare_scenarios(const RunResult& a, const RunResult& b, Metric metric) {
  if (a.dt != b.dt || a.duration != b.duration)
    throw ContractViolation("compare_scenarios: runs must share dt and duration");
  const auto& sa = a.summary[metric].settling_time;
  const auto& sb = b.summary[metric].settling_time;
  Comparison c;
  if (!sa && !sb) return c;
  if (sa && !sb) {
    c.ordering = Comparison::Ordering::a_faster;
    return c;
  }
  if (!sa && sb) {
    c.ordering = Comparison::Ordering::b_faster;
    return c;
  }
  if (*sa == *sb) {
    c.ordering = Comparison::Ordering::equal;
    c.ratio = 1.0;
    return c;
  }
  c.ordering = *sa < *sb ? Comparison::Ordering::a_faster : Comparison::Ordering::b_faster;
  // A run that is settled from its first sample has settling time 0.
  if (*sb > 0.0) c.ratio = *sa / *sb;
  return c;
}

}  // namespace navobs
