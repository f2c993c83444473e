#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spsnav/batch.hpp"

namespace spsnav {

inline constexpr int kConfigSchemaVersion = 1;
inline constexpr const char* kOutDirEnv = "SPSNAV_OUT_DIR";

// Values supplied on the command line; each one that is set wins over the config file.
struct BenchOverrides {
  std::optional<std::string> planner;  // sps | grid
  std::optional<std::string> scene;    // forest | static | mixed | all
  std::optional<std::vector<double>> speeds;
  std::optional<int> trials;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> export_trajectories;
  std::optional<int> jobs;
};

struct BenchmarkConfig {
  BatchConfig batch;
  std::string out_dir = "bench_out";
};

// Built-in defaults: all three scene types, speeds 5/9/13/17, both planners.
BenchmarkConfig default_benchmark_config();

// Precedence: overrides > JSON document > built-in defaults. Throws ConfigError.
BenchmarkConfig parse_benchmark_config(std::string_view json_text);
BenchmarkConfig load_benchmark_config(const std::optional<std::filesystem::path>& path,
                                      const BenchOverrides& overrides);
void apply_overrides(BenchmarkConfig& config, const BenchOverrides& overrides);
std::string benchmark_config_to_json(const BenchmarkConfig& config);

// Records: one JSON object per line, doubles in shortest round-trip form.
std::string record_to_json_line(const TrialSummary& record);
TrialSummary record_from_json_line(std::string_view line);  // throws InputError
void write_records(std::ostream& out, const std::vector<TrialSummary>& records);
std::vector<TrialSummary> read_records(std::istream& in);  // throws InputError

// scene_type,speed,planner,success_rate,mean_accel,max_accel,mean_candidates
void write_summary_csv(std::ostream& out, const std::vector<CellMetrics>& metrics);

// SPS-minus-grid success-rate deltas and acceleration reductions per (scene, speed).
void write_comparison(std::ostream& out, const std::vector<CellMetrics>& metrics);

// Six significant digits, "%.6g".
std::string format_6g(double value);

struct RunArtifacts {
  std::filesystem::path records;
  std::filesystem::path summary;
  std::filesystem::path config;
  std::vector<std::filesystem::path> trajectories;
  BatchResult result;
};

// Runs the batch and writes records.jsonl, summary.csv, config.json and
// trajectories/*.csv under config.out_dir.
RunArtifacts execute_run(const BenchmarkConfig& config);

}  // namespace spsnav
