#include "navobs/config.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace navobs;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string error_path(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<accepted>";
}

}  // namespace

TEST_CASE("minimal document gets defaults") {
  const ScenarioConfig c = parse_config(R"({"trajectory": {"kind": "circular"},
                                            "sensors": {"suite": "full_position"}})");
  CHECK(c == ScenarioConfig{});
}

TEST_CASE("echo round-trips") {
  for (const auto& name : preset_names()) {
    const ScenarioConfig c = preset(name);
    CHECK(parse_config(dump_config(c)) == c);
    CHECK(dump_config(parse_config(dump_config(c))) == dump_config(c));
  }
  ScenarioConfig custom;
  custom.trajectory.kind = TrajectoryKind::custom_harmonic;
  custom.trajectory.position = {HarmonicSignal{1.0, {{0.5, 0.3, 0.1}}},
                                HarmonicSignal{0.0, {{0.2, 0.7, 0.0}, {0.1, 1.1, 2.0}}},
                                HarmonicSignal{2.0, {}}};
  custom.trajectory.omega = HarmonicVector{};
  custom.trajectory.r0_rotvec = Array3{0.1, 0.2, 0.3};
  custom.observer.Q.matrix = {{2.0, 0.1, 0.0}, {0.1, 2.0, 0.0}, {0.0, 0.0, 1.0}};
  custom.observability.mu = 1e-3;
  custom.observability.horizon = 5.0;
  CHECK(parse_config(dump_config(custom)) == custom);
}

TEST_CASE("errors name the key path") {
  const std::string base = R"("trajectory": {"kind": "circular"}, "sensors": {"suite": "full_position"})";
  CHECK(error_path("{" + base + R"(, "observer": {"gamma": 0.5}})") == "observer.gamma");
  CHECK(error_path("{" + base + R"(, "observer": {"gama": 2}})") == "observer.gama");
  CHECK(error_path("{" + base + R"(, "bogus": 1})") == "bogus");
  CHECK(error_path("{" + base + R"(, "integration": {"dt": -1}})") == "integration.dt");
  CHECK(error_path("{" + base + R"(, "integration": {"dt": "fast"}})") == "integration.dt");
  CHECK(error_path(R"({"sensors": {"suite": "full_position"}})") == "trajectory");
  CHECK(error_path(R"({"trajectory": {"kind": "spiral"}, "sensors": {"suite": "full_position"}})") ==
        "trajectory.kind");
  CHECK(error_path(R"({"trajectory": {"kind": "circular"}, "sensors": {"suite": "ranges"}})") ==
        "sensors.anchors");
  CHECK(error_path(R"({"trajectory": {"kind": "circular"},
                       "sensors": {"suite": "bearings", "cameras": [{"position": [0, 0, 0, 1]}]}})")
            .starts_with("sensors.cameras"));
  CHECK(error_path("{" + base + R"(, "observer": {"Q": [[1, 2], [2, 1]]}})") == "observer.Q");
  CHECK(error_path("{ not json") == "<document>");
}

TEST_CASE("comments are accepted") {
  CHECK_NOTHROW(parse_config(R"({
    // scenario
    "trajectory": {"kind": "eight"},
    "sensors": {"suite": "full_position"}
  })"));
}

TEST_CASE("preset values") {
  const ScenarioConfig range = preset("range_circular");
  CHECK(range.sensors.suite == SensorSuite::ranges);
  CHECK(range.sensors.anchors.size() == 4);
  CHECK(range.observer.Q.scale == 5.0);

  const ScenarioConfig eight = preset("scenario_bearing_eight");
  CHECK(eight.sensors.cameras.size() == 1);
  CHECK(eight.sensors.cameras[0].position == Array3{2, 2, 2});
  CHECK_FALSE(eight.sensors.altimeter);
  for (double z : eight.observer.z0) CHECK(z == 1.0);
  CHECK(preset("bearing_eight_altimeter").sensors.altimeter);

  const ScenarioConfig lem = preset("bearing_lemniscate");
  CHECK(lem.sensors.cameras.size() == 4);
  CHECK(lem.observer.k1 == 10.0);
  CHECK(lem.observer.rho1 == 4.0);
  CHECK(lem.observer.rho2 == 1.0);
  CHECK(lem.observer.c5 == 0.3);
  CHECK(lem.observer.c2_hat == 30.0);
  CHECK(lem.observer.V.scale == 12.0);
  CHECK(lem.observer.Q.scale == 2.0);
  CHECK(lem.observer.p0 == 10.0);

  CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("preset files match the built-in presets") {
  for (const auto& name : preset_names()) {
    const std::string path = std::string(NAVOBS_PRESET_DIR) + "/scenario_" + name + ".json";
    const std::string text = read_file(path);
    REQUIRE_MESSAGE(!text.empty(), path);
    CHECK(parse_config(text) == preset(name));
    CHECK(text == dump_config(preset(name)));
  }
}
