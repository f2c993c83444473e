#include "spsnav/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spsnav/errors.hpp"

namespace spsnav {

using nlohmann::json;

namespace {

constexpr double kDegree = kPi / 180.0;

const std::vector<SceneType>& all_scene_types() {
  static const std::vector<SceneType> types{SceneType::forest, SceneType::static_spheres,
                                            SceneType::mixed_spheres};
  return types;
}

void reject_unknown_keys(const json& obj, const std::string& where, const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    if (!known.count(key)) throw ConfigError(where + key + ": unknown field");
  }
}

template <typename T>
void read_field(const json& obj, const std::string& where, const char* key, T& out) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(where + key + ": wrong type");
  }
}

void read_range(const json& obj, const std::string& where, const char* key, Range& out) {
  if (!obj.contains(key)) return;
  const json& r = obj.at(key);
  if (!r.is_array() || r.size() != 2 || !r[0].is_number() || !r[1].is_number())
    throw ConfigError(where + key + ": expected [min, max]");
  out = {r[0].get<double>(), r[1].get<double>()};
}

SceneSpec parse_scene(const json& j, std::size_t index) {
  const std::string where = "scenes[" + std::to_string(index) + "].";
  if (j.is_string()) return SceneSpec::defaults(scene_type_from_string(j.get<std::string>()));
  if (!j.is_object()) throw ConfigError(where + ": expected a scene name or object");
  reject_unknown_keys(j, where,
                      {"scene_type", "length", "width", "height", "obstacle_count", "radius_range",
                       "dynamic_fraction", "dynamic_speed_range", "start_clearance"});
  std::string type_name;
  read_field(j, where, "scene_type", type_name);
  if (type_name.empty()) throw ConfigError(where + "scene_type: required");
  SceneType type;
  try {
    type = scene_type_from_string(type_name);
  } catch (const ConfigError& e) {
    throw ConfigError(where + "scene_type: " + e.what());
  }
  SceneSpec s = SceneSpec::defaults(type);
  read_field(j, where, "length", s.length);
  read_field(j, where, "width", s.width);
  read_field(j, where, "height", s.height);
  read_field(j, where, "obstacle_count", s.obstacle_count);
  read_range(j, where, "radius_range", s.radius_range);
  read_field(j, where, "dynamic_fraction", s.dynamic_fraction);
  read_range(j, where, "dynamic_speed_range", s.dynamic_speed_range);
  read_field(j, where, "start_clearance", s.start_clearance);
  try {
    s.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(where + e.what());
  }
  return s;
}

json scene_to_config_json(const SceneSpec& s) {
  return {{"scene_type", to_string(s.scene_type)},
          {"length", s.length},
          {"width", s.width},
          {"height", s.height},
          {"obstacle_count", s.obstacle_count},
          {"radius_range", {s.radius_range.min, s.radius_range.max}},
          {"dynamic_fraction", s.dynamic_fraction},
          {"dynamic_speed_range", {s.dynamic_speed_range.min, s.dynamic_speed_range.max}},
          {"start_clearance", s.start_clearance}};
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string cell_label(const CellMetrics& m) {
  return std::string(to_string(m.scene_type)) + "," + format_6g(m.speed);
}

}  // namespace

std::string format_6g(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

BenchmarkConfig default_benchmark_config() {
  BenchmarkConfig c;
  for (SceneType t : all_scene_types()) c.batch.scenes.push_back(SceneSpec::defaults(t));
  if (const char* env = std::getenv(kOutDirEnv); env && *env) c.out_dir = env;
  return c;
}

BenchmarkConfig parse_benchmark_config(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  reject_unknown_keys(doc, "",
                      {"schema_version", "scenes", "speeds", "planners", "trials", "seed", "out",
                       "export_trajectories", "jobs", "planner", "trial"});
  int version = 0;
  read_field(doc, "", "schema_version", version);
  if (version != kConfigSchemaVersion)
    throw ConfigError("schema_version: expected " + std::to_string(kConfigSchemaVersion));

  BenchmarkConfig c = default_benchmark_config();
  BatchConfig& b = c.batch;
  if (doc.contains("scenes")) {
    const json& scenes = doc.at("scenes");
    if (!scenes.is_array()) throw ConfigError("scenes: expected an array");
    b.scenes.clear();
    for (std::size_t i = 0; i < scenes.size(); ++i) b.scenes.push_back(parse_scene(scenes[i], i));
  }
  read_field(doc, "", "speeds", b.speeds);
  read_field(doc, "", "planners", b.planners);
  read_field(doc, "", "trials", b.trials_per_cell);
  read_field(doc, "", "seed", b.base_seed);
  read_field(doc, "", "out", c.out_dir);
  read_field(doc, "", "export_trajectories", b.export_trajectories);
  read_field(doc, "", "jobs", b.jobs);

  if (doc.contains("planner")) {
    const json& p = doc.at("planner");
    const std::string where = "planner.";
    if (!p.is_object()) throw ConfigError("planner: expected an object");
    reject_unknown_keys(p, where,
                        {"sps_n", "grid_n", "d_safety", "relaxation_step", "w_goal", "w_safety", "w_x",
                         "w_y", "turn_factor", "turn_threshold_deg", "clearance_norm", "horizon",
                         "time_samples"});
    ScoringConfig s = b.sps;
    double turn_deg = s.turn_threshold / kDegree;
    read_field(p, where, "sps_n", b.sps.n);
    read_field(p, where, "grid_n", b.grid.n);
    read_field(p, where, "d_safety", s.d_safety);
    read_field(p, where, "relaxation_step", s.relaxation_step);
    read_field(p, where, "w_goal", s.w_goal);
    read_field(p, where, "w_safety", s.w_safety);
    read_field(p, where, "w_x", s.w_x);
    read_field(p, where, "w_y", s.w_y);
    read_field(p, where, "turn_factor", s.turn_factor);
    read_field(p, where, "turn_threshold_deg", turn_deg);
    read_field(p, where, "clearance_norm", s.clearance_norm);
    read_field(p, where, "horizon", s.horizon);
    read_field(p, where, "time_samples", s.time_samples);
    s.turn_threshold = turn_deg * kDegree;
    static_cast<ScoringConfig&>(b.sps) = s;
    static_cast<ScoringConfig&>(b.grid) = s;
  }
  if (doc.contains("trial")) {
    const json& t = doc.at("trial");
    const std::string where = "trial.";
    if (!t.is_object()) throw ConfigError("trial: expected an object");
    reject_unknown_keys(t, where, {"dt", "control_period", "tau", "uav_radius", "time_budget"});
    read_field(t, where, "dt", b.trial.dt);
    read_field(t, where, "control_period", b.trial.control_period);
    read_field(t, where, "tau", b.trial.tau);
    read_field(t, where, "uav_radius", b.trial.uav_radius);
    read_field(t, where, "time_budget", b.trial.time_budget);
  }
  b.validate();
  return c;
}

void apply_overrides(BenchmarkConfig& c, const BenchOverrides& o) {
  BatchConfig& b = c.batch;
  if (o.planner) {
    const auto& names = planner_names();
    if (std::find(names.begin(), names.end(), *o.planner) == names.end())
      throw ConfigError("--planner: unknown planner '" + *o.planner + "' (valid: sps, grid)");
    b.planners = {*o.planner};
  }
  if (o.scene && *o.scene != "all") {
    SceneType wanted;
    try {
      wanted = scene_type_from_string(*o.scene);
    } catch (const ConfigError&) {
      throw ConfigError("--scene: unknown scene '" + *o.scene + "' (valid: forest, static, mixed, all)");
    }
    std::vector<SceneSpec> kept;
    for (const SceneSpec& s : b.scenes)
      if (s.scene_type == wanted) kept.push_back(s);
    if (kept.empty()) kept.push_back(SceneSpec::defaults(wanted));
    b.scenes = std::move(kept);
  } else if (o.scene) {
    for (SceneType t : all_scene_types()) {
      const bool present = std::any_of(b.scenes.begin(), b.scenes.end(),
                                       [t](const SceneSpec& s) { return s.scene_type == t; });
      if (!present) b.scenes.push_back(SceneSpec::defaults(t));
    }
  }
  if (o.speeds) b.speeds = *o.speeds;
  if (o.trials) b.trials_per_cell = *o.trials;
  if (o.seed) b.base_seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.export_trajectories) b.export_trajectories = *o.export_trajectories;
  if (o.jobs) b.jobs = *o.jobs;
}

BenchmarkConfig load_benchmark_config(const std::optional<std::filesystem::path>& path,
                                      const BenchOverrides& overrides) {
  BenchmarkConfig c = default_benchmark_config();
  if (path) {
    std::ifstream in(*path);
    if (!in) throw ConfigError("--config: cannot open '" + path->string() + "'");
    std::stringstream text;
    text << in.rdbuf();
    c = parse_benchmark_config(text.str());
  }
  apply_overrides(c, overrides);
  c.batch.validate();
  return c;
}

std::string benchmark_config_to_json(const BenchmarkConfig& c) {
  const BatchConfig& b = c.batch;
  json scenes = json::array();
  for (const SceneSpec& s : b.scenes) scenes.push_back(scene_to_config_json(s));
  json doc = {{"schema_version", kConfigSchemaVersion},
              {"scenes", scenes},
              {"speeds", b.speeds},
              {"planners", b.planners},
              {"trials", b.trials_per_cell},
              {"seed", b.base_seed},
              {"out", c.out_dir},
              {"export_trajectories", b.export_trajectories},
              {"jobs", b.jobs},
              {"planner",
               {{"sps_n", b.sps.n},
                {"grid_n", b.grid.n},
                {"d_safety", b.sps.d_safety},
                {"relaxation_step", b.sps.relaxation_step},
                {"w_goal", b.sps.w_goal},
                {"w_safety", b.sps.w_safety},
                {"w_x", b.sps.w_x},
                {"w_y", b.sps.w_y},
                {"turn_factor", b.sps.turn_factor},
                {"turn_threshold_deg", b.sps.turn_threshold / kDegree},
                {"clearance_norm", b.sps.clearance_norm},
                {"horizon", b.sps.horizon},
                {"time_samples", b.sps.time_samples}}},
              {"trial",
               {{"dt", b.trial.dt},
                {"control_period", b.trial.control_period},
                {"tau", b.trial.tau},
                {"uav_radius", b.trial.uav_radius},
                {"time_budget", b.trial.time_budget}}}};
  return doc.dump(2) + "\n";
}

std::string record_to_json_line(const TrialSummary& r) {
  json j = {{"scene_type", to_string(r.scene_type)},
            {"speed", r.speed},
            {"planner", r.planner},
            {"trial", r.trial_index},
            {"seed", r.seed},
            {"outcome", to_string(r.outcome)},
            {"duration", r.duration},
            {"min_clearance", finite_or_null(r.min_clearance)},
            {"mean_accel", r.mean_accel},
            {"max_accel", r.max_accel},
            {"candidates_evaluated", r.candidates_evaluated_total},
            {"relaxations", r.relaxations_total},
            {"replans", r.replans}};
  return j.dump();
}

TrialSummary record_from_json_line(std::string_view line) {
  try {
    const json j = json::parse(line);
    TrialSummary r;
    r.scene_type = scene_type_from_string(j.at("scene_type").get<std::string>());
    r.speed = j.at("speed").get<double>();
    r.planner = j.at("planner").get<std::string>();
    r.trial_index = j.at("trial").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.outcome = outcome_from_string(j.at("outcome").get<std::string>());
    r.duration = j.at("duration").get<double>();
    const json& mc = j.at("min_clearance");
    r.min_clearance = mc.is_null() ? std::numeric_limits<double>::infinity() : mc.get<double>();
    r.mean_accel = j.at("mean_accel").get<double>();
    r.max_accel = j.at("max_accel").get<double>();
    r.candidates_evaluated_total = j.at("candidates_evaluated").get<long long>();
    r.relaxations_total = j.at("relaxations").get<long long>();
    r.replans = j.at("replans").get<long long>();
    return r;
  } catch (const json::exception& e) {
    throw InputError(std::string("record: ") + e.what());
  } catch (const ConfigError& e) {
    throw InputError(std::string("record: ") + e.what());
  }
}

void write_records(std::ostream& out, const std::vector<TrialSummary>& records) {
  for (const TrialSummary& r : records) out << record_to_json_line(r) << '\n';
}

std::vector<TrialSummary> read_records(std::istream& in) {
  std::vector<TrialSummary> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(record_from_json_line(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (out.empty()) throw InputError("records: no trial records found");
  return out;
}

void write_summary_csv(std::ostream& out, const std::vector<CellMetrics>& metrics) {
  out << "scene_type,speed,planner,success_rate,mean_accel,max_accel,mean_candidates\n";
  for (const CellMetrics& m : metrics) {
    out << to_string(m.scene_type) << ',' << format_6g(m.speed) << ',' << m.planner << ','
        << format_6g(m.success_rate) << ',' << format_6g(m.mean_accel) << ','
        << format_6g(m.max_accel) << ',' << format_6g(m.mean_candidates) << '\n';
  }
}

void write_comparison(std::ostream& out, const std::vector<CellMetrics>& metrics) {
  std::map<std::string, const CellMetrics*> sps, grid;
  std::vector<std::string> order;
  for (const CellMetrics& m : metrics) {
    const std::string key = cell_label(m);
    if (!sps.count(key) && !grid.count(key)) order.push_back(key);
    (m.planner == "sps" ? sps : grid)[key] = &m;
  }
  out << "scene_type,speed,sps_success_rate,grid_success_rate,success_delta,"
         "mean_accel_reduction,max_accel_reduction\n";
  for (const std::string& key : order) {
    if (!sps.count(key) || !grid.count(key)) continue;
    const CellMetrics& s = *sps[key];
    const CellMetrics& g = *grid[key];
    const auto reduction = [](double ours, double theirs) {
      return theirs > 0.0 ? 1.0 - ours / theirs : 0.0;
    };
    out << key << ',' << format_6g(s.success_rate) << ',' << format_6g(g.success_rate) << ','
        << format_6g(s.success_rate - g.success_rate) << ','
        << format_6g(reduction(s.mean_accel, g.mean_accel)) << ','
        << format_6g(reduction(s.max_accel, g.max_accel)) << '\n';
  }
}

RunArtifacts execute_run(const BenchmarkConfig& config) {
  namespace fs = std::filesystem;
  RunArtifacts a;
  a.result = run_batch(config.batch);

  const fs::path dir(config.out_dir);
  fs::create_directories(dir);
  a.records = dir / "records.jsonl";
  a.summary = dir / "summary.csv";
  a.config = dir / "config.json";

  auto open = [](const fs::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    return f;
  };
  {
    auto f = open(a.records);
    write_records(f, a.result.records);
  }
  {
    auto f = open(a.summary);
    write_summary_csv(f, a.result.metrics);
  }
  {
    auto f = open(a.config);
    f << benchmark_config_to_json(config);
  }
  if (!a.result.trajectories.empty()) {
    const fs::path traj_dir = dir / "trajectories";
    fs::create_directories(traj_dir);
    for (const ExportedTrajectory& t : a.result.trajectories) {
      const fs::path p = traj_dir / (std::string(to_string(t.summary.scene_type)) + "_" +
                                     format_6g(t.summary.speed) + "_" + t.summary.planner + "_" +
                                     std::to_string(t.summary.trial_index) + ".csv");
      auto f = open(p);
      write_trajectory_csv(f, t.trajectory);
      a.trajectories.push_back(p);
    }
  }
  return a;
}

}  // namespace spsnav
