#include "spsnav/batch.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "spsnav/errors.hpp"

namespace spsnav {

void BatchConfig::validate() const {
  if (scenes.empty()) throw ConfigError("scenes: at least one scene type is required");
  for (const SceneSpec& s : scenes) s.validate();
  if (speeds.empty()) throw ConfigError("speeds: at least one speed is required");
  for (double v : speeds)
    if (!(v > 0.0)) throw ConfigError("speeds: every speed must be positive");
  if (planners.empty()) throw ConfigError("planners: at least one planner is required");
  for (const std::string& p : planners) {
    if (std::find(planner_names().begin(), planner_names().end(), p) == planner_names().end())
      throw ConfigError("planners: unknown planner '" + p + "' (valid: sps, grid)");
  }
  if (trials_per_cell < 1) throw ConfigError("trials: trials_per_cell must be at least 1");
  if (jobs < 1) throw ConfigError("jobs: must be at least 1");
  if (export_trajectories < 0) throw ConfigError("export_trajectories: must be non-negative");
  try {
    trial.validate();
    PlannerConfig s = sps;
    s.v_set = 1.0;
    s.validate();
    GridConfig g = grid;
    g.v_set = 1.0;
    g.validate();
  } catch (const ContractViolation& e) {
    throw ConfigError(e.what());
  }
}

std::unique_ptr<Planner> make_planner(const std::string& name, double v_set, SceneType scene_type,
                                      const PlannerConfig& sps, const GridConfig& grid) {
  if (name == "sps") {
    PlannerConfig c = sps;
    c.v_set = v_set;
    c.theta_set = PlannerConfig::directions_for(scene_type);
    return std::make_unique<SpsPlanner>(std::move(c));
  }
  if (name == "grid") {
    GridConfig c = grid;
    c.v_set = v_set;
    return std::make_unique<GridPlanner>(std::move(c));
  }
  throw ConfigError("unknown planner '" + name + "' (valid: sps, grid)");
}

TrialSummary summarize(const TrialRecord& record, SceneType scene_type, double speed,
                       const std::string& planner, int trial_index) {
  TrialSummary s;
  s.scene_type = scene_type;
  s.speed = speed;
  s.planner = planner;
  s.trial_index = trial_index;
  s.seed = record.seed;
  s.outcome = record.outcome;
  s.duration = record.trajectory.empty() ? 0.0 : record.trajectory.back().t;
  s.min_clearance = record.min_clearance;
  s.mean_accel = record.mean_accel;
  s.max_accel = record.max_accel;
  s.candidates_evaluated_total = record.candidates_evaluated_total;
  s.relaxations_total = record.relaxations_total;
  s.replans = record.replans;
  return s;
}

namespace {

auto cell_key(const TrialSummary& r) { return std::tie(r.scene_type, r.speed, r.planner); }

struct Job {
  std::size_t scene_index;
  double speed;
  std::string planner;
  int trial;
};

}  // namespace

BatchResult run_batch(const BatchConfig& config) {
  config.validate();

  std::vector<Job> jobs;
  for (std::size_t s = 0; s < config.scenes.size(); ++s)
    for (double v : config.speeds)
      for (const std::string& p : config.planners)
        for (int i = 0; i < config.trials_per_cell; ++i) jobs.push_back({s, v, p, i});

  std::vector<TrialSummary> summaries(jobs.size());
  std::vector<std::vector<TrajectorySample>> kept(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      try {
        const Job& job = jobs[j];
        SceneSpec spec = config.scenes[job.scene_index];
        spec.seed = config.base_seed + static_cast<std::uint64_t>(job.trial);
        const Scene scene = generate_scene(spec);
        const auto planner =
            make_planner(job.planner, job.speed, spec.scene_type, config.sps, config.grid);
        TrialConfig tc = config.trial;
        tc.v_set = job.speed;
        TrialRecord rec = run_trial(scene, *planner, tc, spec.seed);
        summaries[j] = summarize(rec, spec.scene_type, job.speed, job.planner, job.trial);
        if (job.trial < config.export_trajectories) kept[j] = std::move(rec.trajectory);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = jobs.size();
      }
    }
  };

  const int workers = std::min<int>(config.jobs, static_cast<int>(jobs.size()));
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  BatchResult result;
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (jobs[j].trial < config.export_trajectories)
      result.trajectories.push_back({summaries[j], std::move(kept[j])});
  }
  result.records = std::move(summaries);
  auto by_cell_then_trial = [](const TrialSummary& a, const TrialSummary& b) {
    return std::tie(a.scene_type, a.speed, a.planner, a.trial_index) <
           std::tie(b.scene_type, b.speed, b.planner, b.trial_index);
  };
  std::sort(result.records.begin(), result.records.end(), by_cell_then_trial);
  std::sort(result.trajectories.begin(), result.trajectories.end(),
            [&](const ExportedTrajectory& a, const ExportedTrajectory& b) {
              return by_cell_then_trial(a.summary, b.summary);
            });
  result.metrics = aggregate(result.records);
  return result;
}

std::vector<CellMetrics> aggregate(std::vector<TrialSummary> records) {
  std::sort(records.begin(), records.end(), [](const TrialSummary& a, const TrialSummary& b) {
    return std::tie(a.scene_type, a.speed, a.planner, a.trial_index) <
           std::tie(b.scene_type, b.speed, b.planner, b.trial_index);
  });
  std::vector<CellMetrics> out;
  for (std::size_t begin = 0; begin < records.size();) {
    std::size_t end = begin;
    while (end < records.size() && cell_key(records[end]) == cell_key(records[begin])) ++end;

    CellMetrics m;
    m.scene_type = records[begin].scene_type;
    m.speed = records[begin].speed;
    m.planner = records[begin].planner;
    double mean_sum = 0.0, max_sum = 0.0, candidate_sum = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const TrialSummary& r = records[i];
      ++m.trials;
      if (r.outcome == Outcome::success) ++m.successes;
      mean_sum += r.mean_accel;
      max_sum += r.max_accel;
      if (r.replans > 0)
        candidate_sum += static_cast<double>(r.candidates_evaluated_total) / static_cast<double>(r.replans);
    }
    const double n = static_cast<double>(m.trials);
    m.success_rate = static_cast<double>(m.successes) / n;
    m.mean_accel = mean_sum / n;
    m.max_accel = max_sum / n;
    m.mean_candidates = candidate_sum / n;
    out.push_back(std::move(m));
    begin = end;
  }
  return out;
}

}  // namespace spsnav
