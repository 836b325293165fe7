#include "report.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace {

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  using namespace navobs;

  CLI::App app{"navobs: IMU + position-information observer simulations"};
  std::vector<std::string> config_paths;
  std::vector<std::string> presets;
  std::string out_dir = "runs";
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool observability_only = false;
  std::optional<std::string> format;
  bool list_presets = false;
  std::string dump_preset;

  auto* cfg_opt = app.add_option("--config", config_paths, "Scenario file (JSON)")->check(CLI::ExistingFile);
  auto* preset_opt = app.add_option("--preset", presets, "Bundled scenario name");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Override the noise seed");
  app.add_option("--jobs", jobs, "Concurrent runs")->check(CLI::PositiveNumber);
  app.add_flag("--check-observability-only", observability_only,
               "Evaluate the observability condition without simulating");
  app.add_option("--format", format, "Time-series format")->check(CLI::IsMember({"csv", "jsonl"}));
  app.add_flag("--list-presets", list_presets, "Print bundled preset names");
  app.add_option("--dump-preset", dump_preset, "Print a preset's effective config");
  (void)cfg_opt;
  (void)preset_opt;

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_presets) {
      for (const auto& n : preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (!dump_preset.empty()) {
      std::cout << dump_config(preset(dump_preset));
      return 0;
    }

    std::vector<ScenarioConfig> configs;
    for (const auto& p : config_paths) {
      try {
        configs.push_back(parse_config(read_text(p)));
      } catch (const ConfigError& e) {
        throw std::runtime_error(p + ": " + e.what());
      }
    }
    for (const auto& p : presets) configs.push_back(preset(p));
    if (configs.empty()) {
      std::cerr << "error: one of --config or --preset is required\n";
      return 2;
    }

    std::vector<cli::Job> job_list;
    std::map<std::string, int> seen;
    for (auto& c : configs) {
      if (seed) c.noise.seed = *seed;
      if (format) c.output.format = *format;
      std::filesystem::path dir = out_dir;
      if (configs.size() > 1) {
        const int n = seen[c.name]++;
        dir /= n == 0 ? c.name : fmt::format("{}_{}", c.name, n);
      }
      job_list.push_back({c, dir});
    }

    const auto outcomes = cli::run_jobs(job_list, observability_only, jobs);
    int status = 0;
    for (const auto& o : outcomes) {
      (o.status == 0 ? std::cout : std::cerr) << (o.status == 0 ? "" : "error: ") << o.message << '\n';
      status = std::max(status, o.status);
    }
    return status;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
