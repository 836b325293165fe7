#include "navobs/config.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <set>

namespace navobs {

using nlohmann::json;

ConfigError::ConfigError(std::string path, const std::string& message)
    : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}

namespace {

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

template <std::size_t N>
std::array<double, N> as_array(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != N)
    throw ConfigError(path, fmt::format("expected an array of {} numbers", N));
  std::array<double, N> a{};
  for (std::size_t i = 0; i < N; ++i) a[i] = as_number(j[i], index_path(path, i));
  return a;
}

// Walks one JSON object, remembering which keys were consumed so the rest
// can be reported as unknown.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string path(const std::string& key) const { return join(path_, key); }

  const json& at(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path(key), "missing required key");
    return j_.at(key);
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  void number(const std::string& key, double& out) {
    if (const json* v = find(key)) out = as_number(*v, path(key));
  }
  void integer(const std::string& key, int& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_integer()) throw ConfigError(path(key), "expected an integer");
      out = v->get<int>();
    }
  }
  void unsigned64(const std::string& key, std::uint64_t& out) {
    if (const json* v = find(key)) {
      if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
        throw ConfigError(path(key), "expected a non-negative integer");
      out = v->get<std::uint64_t>();
    }
  }
  void boolean(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) throw ConfigError(path(key), "expected true or false");
      out = v->get<bool>();
    }
  }
  void string(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) throw ConfigError(path(key), "expected a string");
      out = v->get<std::string>();
    }
  }
  template <std::size_t N>
  void array(const std::string& key, std::array<double, N>& out) {
    if (const json* v = find(key)) out = as_array<N>(*v, path(key));
  }
  template <std::size_t N>
  void optional_array(const std::string& key, std::optional<std::array<double, N>>& out) {
    if (const json* v = find(key)) {
      if (v->is_null()) {
        out.reset();
      } else {
        out = as_array<N>(*v, path(key));
      }
    }
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.contains(it.key())) throw ConfigError(path(it.key()), "unknown key");
    }
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

HarmonicSignal read_signal(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  HarmonicSignal s;
  r.number("offset", s.offset);
  if (const json* terms = r.find("terms")) {
    if (!terms->is_array()) throw ConfigError(r.path("terms"), "expected an array");
    for (std::size_t i = 0; i < terms->size(); ++i) {
      const auto a = as_array<3>((*terms)[i], index_path(r.path("terms"), i));
      s.terms.push_back({a[0], a[1], a[2]});
    }
  }
  r.finish();
  return s;
}

HarmonicVector read_harmonics(const json& j, const std::string& path) {
  ObjectReader r(j, path);
  HarmonicVector v;
  const char* axes[] = {"x", "y", "z"};
  for (int i = 0; i < 3; ++i) {
    if (const json* a = r.find(axes[i])) v[static_cast<std::size_t>(i)] = read_signal(*a, r.path(axes[i]));
  }
  r.finish();
  return v;
}

json signal_json(const HarmonicSignal& s) {
  json terms = json::array();
  for (const auto& h : s.terms) terms.push_back({h.amp, h.freq, h.phase});
  return {{"offset", s.offset}, {"terms", terms}};
}

json harmonics_json(const HarmonicVector& v) {
  return {{"x", signal_json(v[0])}, {"y", signal_json(v[1])}, {"z", signal_json(v[2])}};
}

WeightConfig read_weight(const json& j, const std::string& path) {
  WeightConfig w;
  if (j.is_number()) {
    w.scale = as_number(j, path);
    return w;
  }
  if (!j.is_array()) throw ConfigError(path, "expected a number or a square matrix");
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& row = j[i];
    const std::string rp = index_path(path, i);
    if (!row.is_array()) throw ConfigError(rp, "expected a matrix row");
    std::vector<double> r;
    for (std::size_t k = 0; k < row.size(); ++k) r.push_back(as_number(row[k], index_path(rp, k)));
    w.matrix.push_back(std::move(r));
  }
  return w;
}

json weight_json(const WeightConfig& w) {
  if (w.matrix.empty()) return w.scale;
  return w.matrix;
}

template <typename Fn>
auto rethrow_as_config(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const ContractViolation& e) {
    throw ConfigError(path, e.what());
  }
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  ScenarioConfig cfg;
  ObjectReader root(doc, "");
  root.string("name", cfg.name);

  {
    ObjectReader r(root.at("trajectory"), "trajectory");
    std::string kind;
    r.string("kind", kind);
    if (kind.empty()) throw ConfigError(r.path("kind"), "missing required key");
    cfg.trajectory.kind =
        rethrow_as_config(r.path("kind"), [&] { return trajectory_kind_from_string(kind); });
    if (const json* p = r.find("position")) cfg.trajectory.position = read_harmonics(*p, r.path("position"));
    if (cfg.trajectory.kind == TrajectoryKind::custom_harmonic && !r.has("position"))
      throw ConfigError(r.path("position"), "required for custom-harmonic trajectories");
    if (const json* o = r.find("omega")) {
      if (!o->is_null()) cfg.trajectory.omega = read_harmonics(*o, r.path("omega"));
    }
    r.optional_array("r0_rotvec", cfg.trajectory.r0_rotvec);
    r.array("bias_deg_s", cfg.trajectory.bias_deg_s);
    r.finish();
  }

  {
    ObjectReader r(root.at("sensors"), "sensors");
    std::string suite;
    r.string("suite", suite);
    if (suite.empty()) throw ConfigError(r.path("suite"), "missing required key");
    cfg.sensors.suite =
        rethrow_as_config(r.path("suite"), [&] { return sensor_suite_from_string(suite); });
    r.boolean("altimeter", cfg.sensors.altimeter);
    if (const json* a = r.find("anchors")) {
      if (!a->is_array()) throw ConfigError(r.path("anchors"), "expected an array");
      for (std::size_t i = 0; i < a->size(); ++i)
        cfg.sensors.anchors.push_back(as_array<3>((*a)[i], index_path(r.path("anchors"), i)));
    }
    if (const json* a = r.find("alpha")) {
      if (!a->is_array()) throw ConfigError(r.path("alpha"), "expected an array");
      for (std::size_t i = 0; i < a->size(); ++i)
        cfg.sensors.alpha.push_back(as_number((*a)[i], index_path(r.path("alpha"), i)));
    }
    if (const json* cams = r.find("cameras")) {
      if (!cams->is_array()) throw ConfigError(r.path("cameras"), "expected an array");
      for (std::size_t i = 0; i < cams->size(); ++i) {
        ObjectReader c((*cams)[i], index_path(r.path("cameras"), i));
        CameraConfig cc;
        cc.position = as_array<3>(c.at("position"), c.path("position"));
        c.optional_array("quaternion", cc.quaternion);
        c.optional_array("look_at", cc.look_at);
        c.finish();
        cfg.sensors.cameras.push_back(cc);
      }
    }
    r.finish();
  }

  if (const json* j = root.find("observer")) {
    ObjectReader r(*j, "observer");
    auto& o = cfg.observer;
    r.number("k1", o.k1);
    r.number("k2", o.k2);
    r.number("rho1", o.rho1);
    r.number("rho2", o.rho2);
    r.number("eps_b", o.eps_b);
    r.number("c5", o.c5);
    r.number("c2_hat", o.c2_hat);
    r.number("gamma", o.gamma);
    if (const json* q = r.find("Q")) o.Q = read_weight(*q, r.path("Q"));
    if (const json* v = r.find("V")) o.V = read_weight(*v, r.path("V"));
    r.number("p0", o.p0);
    r.array("z0", o.z0);
    r.array("q0", o.q0);
    r.array("b0", o.b0);
    r.string("riccati_integrator", o.riccati_integrator);
    r.finish();
  }

  if (const json* j = root.find("world")) {
    ObjectReader r(*j, "world");
    r.number("g", cfg.world.g);
    r.array("m_I", cfg.world.m_I);
    r.finish();
  }

  if (const json* j = root.find("integration")) {
    ObjectReader r(*j, "integration");
    r.number("dt", cfg.integration.dt);
    r.number("duration", cfg.integration.duration);
    r.integer("position_decimation", cfg.integration.position_decimation);
    r.finish();
  }

  if (const json* j = root.find("noise")) {
    ObjectReader r(*j, "noise");
    r.number("gyro", cfg.noise.gyro);
    r.number("accel", cfg.noise.accel);
    r.number("mag", cfg.noise.mag);
    r.number("output", cfg.noise.output);
    r.unsigned64("seed", cfg.noise.seed);
    r.finish();
  }

  if (const json* j = root.find("thresholds")) {
    ObjectReader r(*j, "thresholds");
    auto& t = cfg.thresholds;
    r.number("position", t.position);
    r.number("velocity", t.velocity);
    r.number("acceleration", t.acceleration);
    r.number("rotation", t.rotation);
    r.number("bias_deg_s", t.bias_deg_s);
    r.number("zeta", t.zeta);
    r.finish();
  }

  if (const json* j = root.find("observability")) {
    ObjectReader r(*j, "observability");
    auto& ob = cfg.observability;
    r.number("delta", ob.delta);
    if (const json* mu = r.find("mu"); mu != nullptr && !mu->is_null())
      ob.mu = as_number(*mu, r.path("mu"));
    r.integer("samples", ob.samples);
    if (const json* h = r.find("horizon"); h != nullptr && !h->is_null())
      ob.horizon = as_number(*h, r.path("horizon"));
    r.finish();
  }

  if (const json* j = root.find("output")) {
    ObjectReader r(*j, "output");
    r.string("format", cfg.output.format);
    r.boolean("plot_script", cfg.output.plot_script);
    r.finish();
  }
  root.finish();

  // Semantic validation; map builder errors back onto key paths.
  try {
    (void)build_scenario(cfg);
  } catch (const ContractViolation& e) {
    std::string msg = e.what();
    const auto colon = msg.find(':');
    const std::string first = msg.substr(0, colon);
    if (colon != std::string::npos && first.find(' ') == std::string::npos) {
      throw ConfigError(first, msg.substr(colon + 2));
    }
    throw ConfigError("", msg);
  }
  return cfg;
}

ScenarioConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, /*ignore_comments=*/true);
  } catch (const json::parse_error& e) {
    throw ConfigError("<document>", e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const ScenarioConfig& c) {
  json traj = {{"kind", std::string(to_string(c.trajectory.kind))},
               {"bias_deg_s", c.trajectory.bias_deg_s}};
  if (c.trajectory.kind == TrajectoryKind::custom_harmonic)
    traj["position"] = harmonics_json(c.trajectory.position);
  if (c.trajectory.omega) traj["omega"] = harmonics_json(*c.trajectory.omega);
  if (c.trajectory.r0_rotvec) traj["r0_rotvec"] = *c.trajectory.r0_rotvec;

  json sensors = {{"suite", std::string(to_string(c.sensors.suite))},
                  {"altimeter", c.sensors.altimeter}};
  if (!c.sensors.anchors.empty()) sensors["anchors"] = c.sensors.anchors;
  if (!c.sensors.alpha.empty()) sensors["alpha"] = c.sensors.alpha;
  if (!c.sensors.cameras.empty()) {
    json cams = json::array();
    for (const auto& cam : c.sensors.cameras) {
      json jc = {{"position", cam.position}};
      if (cam.quaternion) jc["quaternion"] = *cam.quaternion;
      if (cam.look_at) jc["look_at"] = *cam.look_at;
      cams.push_back(jc);
    }
    sensors["cameras"] = cams;
  }

  const auto& o = c.observer;
  json observer = {{"k1", o.k1},       {"k2", o.k2},
                   {"rho1", o.rho1},   {"rho2", o.rho2},
                   {"eps_b", o.eps_b}, {"c5", o.c5},
                   {"c2_hat", o.c2_hat}, {"gamma", o.gamma},
                   {"Q", weight_json(o.Q)}, {"V", weight_json(o.V)},
                   {"p0", o.p0},       {"z0", o.z0},
                   {"q0", o.q0},       {"b0", o.b0},
                   {"riccati_integrator", o.riccati_integrator}};

  json observability = {{"delta", c.observability.delta}, {"samples", c.observability.samples}};
  if (c.observability.mu) observability["mu"] = *c.observability.mu;
  if (c.observability.horizon) observability["horizon"] = *c.observability.horizon;

  return {
      {"name", c.name},
      {"trajectory", traj},
      {"sensors", sensors},
      {"observer", observer},
      {"world", {{"g", c.world.g}, {"m_I", c.world.m_I}}},
      {"integration",
       {{"dt", c.integration.dt},
        {"duration", c.integration.duration},
        {"position_decimation", c.integration.position_decimation}}},
      {"noise",
       {{"gyro", c.noise.gyro},
        {"accel", c.noise.accel},
        {"mag", c.noise.mag},
        {"output", c.noise.output},
        {"seed", c.noise.seed}}},
      {"thresholds",
       {{"position", c.thresholds.position},
        {"velocity", c.thresholds.velocity},
        {"acceleration", c.thresholds.acceleration},
        {"rotation", c.thresholds.rotation},
        {"bias_deg_s", c.thresholds.bias_deg_s},
        {"zeta", c.thresholds.zeta}}},
      {"observability", observability},
      {"output", {{"format", c.output.format}, {"plot_script", c.output.plot_script}}},
  };
}

std::string dump_config(const ScenarioConfig& cfg) { return config_to_json(cfg).dump(2) + "\n"; }

// --- presets ----------------------------------------------------------------

namespace {

ScenarioConfig range_circular() {
  ScenarioConfig c;
  c.name = "range_circular";
  c.trajectory.kind = TrajectoryKind::circular;
  c.sensors.suite = SensorSuite::ranges;
  c.sensors.anchors = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  c.observer.Q.scale = 5.0;
  c.integration.duration = 60.0;
  return c;
}

ScenarioConfig bearing_eight(bool altimeter) {
  ScenarioConfig c;
  c.name = altimeter ? "bearing_eight_altimeter" : "bearing_eight";
  c.trajectory.kind = TrajectoryKind::eight;
  c.sensors.suite = SensorSuite::bearings;
  c.sensors.altimeter = altimeter;
  c.sensors.cameras = {CameraConfig{{2.0, 2.0, 2.0}, std::nullopt, Array3{0.0, 0.0, 0.0}}};
  c.observer.z0.fill(1.0);
  c.integration.duration = 150.0;
  return c;
}

ScenarioConfig bearing_lemniscate() {
  ScenarioConfig c;
  c.name = "bearing_lemniscate";
  c.trajectory.kind = TrajectoryKind::lemniscate;
  c.sensors.suite = SensorSuite::bearings;
  c.sensors.cameras = {
      CameraConfig{{0.0, 0.0, 2.8}, Array4{0.0, 1.0, 0.0, 0.0}, std::nullopt},
      CameraConfig{{2.89, 0.0, 2.57}, Array4{0.5, 0.0, -0.86, 0.0}, std::nullopt},
      CameraConfig{{-2.44, 0.0, 2.42}, Array4{0.45, 0.0, 0.89, 0.0}, std::nullopt},
      CameraConfig{{0.08, 2.65, 2.37}, Array4{0.32, 0.63, -0.63, 0.32}, std::nullopt},
  };
  auto& o = c.observer;
  o.k1 = 10.0;
  o.k2 = 1.0;
  o.rho1 = 4.0;
  o.rho2 = 1.0;
  o.eps_b = 0.001;
  o.c5 = 0.3;
  o.c2_hat = 30.0;
  o.gamma = 2.0;
  o.V.scale = 12.0;
  o.Q.scale = 2.0;
  o.p0 = 10.0;
  // k1 rho2 |a|^2 dt must stay below 2 for the explicit attitude step.
  c.integration.dt = 0.001;
  c.integration.duration = 40.0;
  return c;
}

std::string_view strip_prefix(std::string_view name) {
  constexpr std::string_view prefix = "scenario_";
  if (name.starts_with(prefix)) name.remove_prefix(prefix.size());
  return name;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"range_circular", "bearing_eight", "bearing_eight_altimeter", "bearing_lemniscate"};
}

ScenarioConfig preset(std::string_view name) {
  const std::string_view n = strip_prefix(name);
  if (n == "range_circular") return range_circular();
  if (n == "bearing_eight") return bearing_eight(false);
  if (n == "bearing_eight_altimeter") return bearing_eight(true);
  if (n == "bearing_lemniscate") return bearing_lemniscate();
  throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

}  // namespace navobs
