#pragma once

// Run artifacts: time-series table, JSON summary and a plot script.

#include "navobs/config.hpp"
#include "navobs/scenario.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace navobs::cli {

enum class SeriesFormat { csv, jsonl };

SeriesFormat series_format_from_string(std::string_view s);

/// Fixed column order of the time-series table.
const std::vector<std::string>& series_columns();

void write_series(std::ostream& os, const RunResult& r, SeriesFormat fmt);

nlohmann::json verdict_json(const ObservabilityVerdict& v);
nlohmann::json summary_json(const RunResult& r);
nlohmann::json observability_summary_json(const ScenarioConfig& cfg, const ObservabilityVerdict& v);

std::string plot_script(const std::string& series_file, SeriesFormat fmt);

struct Job {
  ScenarioConfig config;
  std::filesystem::path out_dir;
};

struct JobOutcome {
  int status = 0;
  std::string message;
};

/// Runs one job and writes its artifacts under job.out_dir.
JobOutcome run_job(const Job& job, bool observability_only);

/// Runs jobs on up to `jobs` threads. Outcomes are in job order.
std::vector<JobOutcome> run_jobs(const std::vector<Job>& jobs, bool observability_only, int threads);

}  // namespace navobs::cli
