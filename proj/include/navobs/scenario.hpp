#pragma once

// Scenario configuration, the simulation driver and run summaries.

#include "navobs/observability.hpp"
#include "navobs/observer.hpp"
#include "navobs/trajectory.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace navobs {

using Array3 = std::array<double, 3>;
using Array4 = std::array<double, 4>;

struct TrajectoryConfig {
  TrajectoryKind kind = TrajectoryKind::circular;
  // Only read for custom-harmonic.
  HarmonicVector position;
  // Empty optional: the reference profile for circular/eight/custom,
  // zero for lemniscate.
  std::optional<HarmonicVector> omega;
  // Rotation vector of R0 (rad). Empty: the kind's default.
  std::optional<Array3> r0_rotvec;
  Array3 bias_deg_s{2.0, 2.0, 2.0};

  friend bool operator==(const TrajectoryConfig&, const TrajectoryConfig&) = default;
};

enum class SensorSuite { full_position, ranges, bearings };

std::string_view to_string(SensorSuite s);
SensorSuite sensor_suite_from_string(std::string_view s);

struct CameraConfig {
  Array3 position{0.0, 0.0, 0.0};
  // Scalar-first orientation; normalized when the scenario is built.
  std::optional<Array4> quaternion;
  // Alternative to `quaternion`: boresight (third axis) toward this point.
  std::optional<Array3> look_at;

  friend bool operator==(const CameraConfig&, const CameraConfig&) = default;
};

struct SensorConfig {
  SensorSuite suite = SensorSuite::full_position;
  bool altimeter = false;
  std::vector<Array3> anchors;
  std::vector<double> alpha;  // empty: uniform
  std::vector<CameraConfig> cameras;

  friend bool operator==(const SensorConfig&, const SensorConfig&) = default;
};

/// Either scale * I or an explicit square matrix.
struct WeightConfig {
  double scale = 1.0;
  std::vector<std::vector<double>> matrix;

  friend bool operator==(const WeightConfig&, const WeightConfig&) = default;
};

struct ObserverConfig {
  double k1 = 2.0;
  double k2 = 1.0;
  double rho1 = 1.0;
  double rho2 = 0.1;
  double eps_b = 0.001;
  double c5 = 0.06;
  double c2_hat = 15.0;
  double gamma = 2.0;
  WeightConfig Q{1.0, {}};
  WeightConfig V{1.0, {}};
  double p0 = 1.0;  // P(0) = p0 I
  std::array<double, 9> z0{};
  Array4 q0{1.0, 0.0, 0.0, 0.0};
  Array3 b0{0.0, 0.0, 0.0};
  std::string riccati_integrator = "rk4";

  friend bool operator==(const ObserverConfig&, const ObserverConfig&) = default;
};

struct WorldConfig {
  double g = 9.81;
  Array3 m_I{0.033, 0.1, 0.49};

  friend bool operator==(const WorldConfig&, const WorldConfig&) = default;
};

struct IntegrationConfig {
  double dt = 0.005;
  double duration = 60.0;
  int position_decimation = 1;

  friend bool operator==(const IntegrationConfig&, const IntegrationConfig&) = default;
};

struct NoiseConfig {
  double gyro = 0.0;
  double accel = 0.0;
  double mag = 0.0;
  double output = 0.0;
  std::uint64_t seed = 1;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

struct ThresholdConfig {
  double position = 0.05;      // m
  double velocity = 0.1;       // m/s
  double acceleration = 0.5;   // m/s^2
  double rotation = 0.01;      // |R~|
  double bias_deg_s = 0.1;     // deg/s
  double zeta = 0.1;

  friend bool operator==(const ThresholdConfig&, const ThresholdConfig&) = default;
};

struct ObservabilityConfig {
  double delta = 2.0;
  std::optional<double> mu;  // default 1e-4 * delta
  int samples = 256;
  std::optional<double> horizon;  // default: run duration (at least delta)

  friend bool operator==(const ObservabilityConfig&, const ObservabilityConfig&) = default;
};

struct OutputConfig {
  std::string format = "csv";  // csv | jsonl
  bool plot_script = true;

  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  TrajectoryConfig trajectory;
  SensorConfig sensors;
  ObserverConfig observer;
  WorldConfig world;
  IntegrationConfig integration;
  NoiseConfig noise;
  ThresholdConfig thresholds;
  ObservabilityConfig observability;
  OutputConfig output;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// --- built scenario ---------------------------------------------------------

using SensorSet = std::variant<std::monostate, RangeAnchorSet, BearingCameraSet>;

/// Runtime objects derived from a validated ScenarioConfig.
struct Scenario {
  TrajectorySpec trajectory;
  SensorSet sensors;  // monostate: full position
  ObserverParams params;
  WeightSchedule weights;
  ObserverState initial;
  WorldConstants world;
  NoiseSpec noise;
  std::uint64_t seed = 1;
  double dt = 0.005;
  double duration = 0.0;
  int decimation = 1;
  PeWindow window;
  double horizon = 0.0;

  Eigen::Index output_rows() const;
};

/// Throws ContractViolation with a description of the first invalid field.
Scenario build_scenario(const ScenarioConfig& cfg);

PositionOutput measure(const Scenario& sc, const Vec3& p, double t);

ObservabilityVerdict check_observability(const Scenario& sc);

// --- results ----------------------------------------------------------------

struct RunSample {
  double t = 0.0;
  ErrorReport err;
  StateEstimate est;
  UnitQuaternion q_hat;
  Vec3 p_true = Vec3::Zero();
  double p_eig_min = 0.0;
  double p_eig_max = 0.0;
  double sigma2_norm = 0.0;
};

enum class Metric { position, velocity, acceleration, rotation, bias, zeta };

std::string_view to_string(Metric m);
Metric metric_from_string(std::string_view s);

struct MetricSummary {
  std::optional<double> settling_time;  // empty: never settles
  double steady_state_mean = 0.0;       // mean over the last 20%
  double final_window_max = 0.0;        // max over the last 20%
  double threshold = 0.0;
};

struct RunSummary {
  std::array<MetricSummary, 6> metrics;
  double p_eig_min = 0.0;
  double p_eig_max = 0.0;
  double max_apparent_accel = 0.0;
  double max_sigma2 = 0.0;
  std::vector<std::string> warnings;

  const MetricSummary& operator[](Metric m) const { return metrics[static_cast<int>(m)]; }
};

struct RunResult {
  ScenarioConfig config;
  std::vector<RunSample> samples;
  ObservabilityVerdict verdict;
  RunSummary summary;
  double dt = 0.0;
  double duration = 0.0;
};

/// Runs the closed loop. Deterministic in (cfg, seed). A failing observer
/// step throws std::runtime_error naming the step index and cause.
RunResult run_scenario(const ScenarioConfig& cfg);

/// First time after which `series` stays below `threshold`.
std::optional<double> settling_time(const std::vector<double>& t,
                                    const std::vector<double>& series, double threshold);

struct Comparison {
  enum class Ordering { a_faster, b_faster, equal, no_settle };
  Ordering ordering = Ordering::no_settle;
  std::optional<double> ratio;  // settle(a) / settle(b) when both settle
};

/// Settling-time comparison on one metric. Throws ContractViolation when
/// the runs differ in dt or duration.
Comparison compare_scenarios(const RunResult& a, const RunResult& b, Metric metric);

}  // namespace navobs
