#include "report.hpp"

#include <fmt/format.h>

#include <atomic>
#include <fstream>
#include <thread>

namespace navobs::cli {

using nlohmann::json;

SeriesFormat series_format_from_string(std::string_view s) {
  if (s == "csv") return SeriesFormat::csv;
  if (s == "jsonl") return SeriesFormat::jsonl;
  throw ConfigError("output.format", "expected 'csv' or 'jsonl'");
}

const std::vector<std::string>& series_columns() {
  static const std::vector<std::string> cols = {
      "t",        "pos_err",  "vel_err",  "acc_err",  "rot_err",   "bias_err",   "zeta_norm",
      "p_hat_x",  "p_hat_y",  "p_hat_z",  "v_hat_x",  "v_hat_y",   "v_hat_z",    "a_hat_x",
      "a_hat_y",  "a_hat_z",  "q_hat_w",  "q_hat_x",  "q_hat_y",   "q_hat_z",    "b_hat_x",
      "b_hat_y",  "b_hat_z",  "p_x",      "p_y",      "p_z",       "p_eig_min",  "p_eig_max",
      "sigma2_norm"};
  return cols;
}

namespace {

std::vector<double> row(const RunSample& s) {
  const auto& e = s.err;
  const auto& x = s.est;
  const auto q = s.q_hat.coeffs();
  return {s.t,          e.pos_err,    e.vel_err,    e.acc_err,    e.rot_err,    e.bias_err,
          e.zeta_norm,  x.p_hat.x(),  x.p_hat.y(),  x.p_hat.z(),  x.v_hat.x(),  x.v_hat.y(),
          x.v_hat.z(),  x.a_hat.x(),  x.a_hat.y(),  x.a_hat.z(),  q[0],         q[1],
          q[2],         q[3],         x.b_hat.x(),  x.b_hat.y(),  x.b_hat.z(),  s.p_true.x(),
          s.p_true.y(), s.p_true.z(), s.p_eig_min,  s.p_eig_max,  s.sigma2_norm};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path.string());
}

}  // namespace

void write_series(std::ostream& os, const RunResult& r, SeriesFormat format) {
  const auto& cols = series_columns();
  std::string buf;
  if (format == SeriesFormat::csv) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      if (i) buf += ',';
      buf += cols[i];
    }
    buf += '\n';
  }
  for (const auto& s : r.samples) {
    const auto vals = row(s);
    if (format == SeriesFormat::csv) {
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) buf += ',';
        fmt::format_to(std::back_inserter(buf), "{}", vals[i]);
      }
    } else {
      buf += '{';
      for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) buf += ',';
        fmt::format_to(std::back_inserter(buf), "\"{}\":{}", cols[i], vals[i]);
      }
      buf += '}';
    }
    buf += '\n';
    if (buf.size() > (1u << 16)) {
      os << buf;
      buf.clear();
    }
  }
  os << buf;
}

json verdict_json(const ObservabilityVerdict& v) {
  return {{"verdict", v.passed ? "pass" : "fail"},
          {"min_eigenvalue", v.min_eigenvalue},
          {"worst_window_start", v.worst_window_start},
          {"detail", v.detail}};
}

json summary_json(const RunResult& r) {
  json metrics = json::object();
  for (int i = 0; i < 6; ++i) {
    const auto m = static_cast<Metric>(i);
    const auto& ms = r.summary[m];
    metrics[std::string(to_string(m))] = {{"settling_time", optional_number(ms.settling_time)},
                                          {"steady_state_mean", ms.steady_state_mean},
                                          {"final_window_max", ms.final_window_max},
                                          {"threshold", ms.threshold}};
  }
  return {{"name", r.config.name},
          {"dt", r.dt},
          {"duration", r.duration},
          {"samples", r.samples.size()},
          {"metrics", metrics},
          {"riccati", {{"p_eig_min", r.summary.p_eig_min}, {"p_eig_max", r.summary.p_eig_max}}},
          {"max_apparent_accel", r.summary.max_apparent_accel},
          {"max_sigma2", r.summary.max_sigma2},
          {"observability", verdict_json(r.verdict)},
          {"warnings", r.summary.warnings},
          {"config", config_to_json(r.config)}};
}

json observability_summary_json(const ScenarioConfig& cfg, const ObservabilityVerdict& v) {
  return {{"name", cfg.name}, {"observability", verdict_json(v)}, {"config", config_to_json(cfg)}};
}

std::string plot_script(const std::string& series_file, SeriesFormat format) {
  const char* loader = format == SeriesFormat::csv ? "pd.read_csv(path)" : "pd.read_json(path, lines=True)";
  return fmt::format(R"(#!/usr/bin/env python3
# Error norms against time and the estimated trajectory against the true one.
import sys
import pandas as pd
import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{file}"
d = {loader}

fig, axes = plt.subplots(5, 1, sharex=True, figsize=(7, 9))
series = [
    ("pos_err", "|p - p_hat| [m]"),
    ("vel_err", "|v - v_hat| [m/s]"),
    ("acc_err", "|a - a_hat| [m/s^2]"),
    ("rot_err", "|R~|"),
    ("bias_err", "|b - b_hat| [rad/s]"),
]
for ax, (col, label) in zip(axes, series):
    ax.plot(d["t"], d[col])
    ax.set_ylabel(label)
    ax.grid(True)
axes[-1].set_xlabel("t [s]")
fig.tight_layout()

fig3 = plt.figure()
ax3 = fig3.add_subplot(projection="3d")
ax3.plot(d["p_x"], d["p_y"], d["p_z"], label="true")
ax3.plot(d["p_hat_x"], d["p_hat_y"], d["p_hat_z"], "--", label="estimate")
ax3.set_xlabel("x [m]")
ax3.set_ylabel("y [m]")
ax3.set_zlabel("z [m]")
ax3.legend()

plt.show()
)",
                     fmt::arg("file", series_file), fmt::arg("loader", loader));
}

JobOutcome run_job(const Job& job, bool observability_only) {
  try {
    std::filesystem::create_directories(job.out_dir);
    if (observability_only) {
      const Scenario sc = build_scenario(job.config);
      const ObservabilityVerdict v = check_observability(sc);
      write_file(job.out_dir / "summary.json",
                 observability_summary_json(job.config, v).dump(2) + "\n");
      return {0, fmt::format("{}: observability {}", job.config.name, v.passed ? "pass" : "fail")};
    }

    const SeriesFormat format = series_format_from_string(job.config.output.format);
    const RunResult r = run_scenario(job.config);
    const std::string series_name = format == SeriesFormat::csv ? "timeseries.csv" : "timeseries.jsonl";
    {
      std::ofstream f(job.out_dir / series_name, std::ios::binary);
      if (!f) throw std::runtime_error("cannot open " + (job.out_dir / series_name).string());
      write_series(f, r, format);
    }
    write_file(job.out_dir / "summary.json", summary_json(r).dump(2) + "\n");
    if (job.config.output.plot_script)
      write_file(job.out_dir / "plot.py", plot_script(series_name, format));

    const auto& pos = r.summary[Metric::position];
    return {0, fmt::format("{}: final-window max position error {:.3g} m, settled at {}", job.config.name,
                           pos.final_window_max,
                           pos.settling_time ? fmt::format("{:.2f} s", *pos.settling_time) : "never")};
  } catch (const std::exception& e) {
    return {1, fmt::format("{}: {}", job.config.name, e.what())};
  }
}

std::vector<JobOutcome> run_jobs(const std::vector<Job>& jobs, bool observability_only, int threads) {
  std::vector<JobOutcome> out(jobs.size());
  const auto n = static_cast<std::size_t>(std::max(1, threads));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = run_job(jobs[i], observability_only);
  };
  std::vector<std::jthread> pool;
  for (std::size_t i = 1; i < std::min(n, jobs.size()); ++i) pool.emplace_back(worker);
  worker();
  pool.clear();
  return out;
}

}  // namespace navobs::cli
