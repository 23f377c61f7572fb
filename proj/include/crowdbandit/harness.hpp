#pragma once

// Experiment orchestration: builds problem instances, runs every configured
// strategy for every run index, snapshots accuracy at the budget
// checkpoints, and writes results.csv / summary.json.

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crowdbandit/config.hpp"
#include "crowdbandit/core.hpp"
#include "crowdbandit/regret.hpp"
#include "crowdbandit/rng.hpp"
#include "crowdbandit/run.hpp"
#include "crowdbandit/workers.hpp"

namespace crowdbandit {

struct SyntheticSpec {
  int num_tasks = 300;
  int num_workers = 30;
  int num_contexts = 3;
  std::string model = "spammer-hammer";
  std::vector<double> proportions;  // empty: round-robin contexts
};

struct StrategySpec {
  std::string label;  // unique name in output
  std::string key;    // registry key: bbta, iethresh, crowdsense, optkg, optkg-multi, random
  std::map<std::string, std::string> params;
};

struct ExperimentConfig {
  std::optional<SyntheticSpec> synthetic;
  std::filesystem::path tasks_path;
  std::filesystem::path matrix_path;
  std::vector<StrategySpec> strategies;
  std::int64_t budget = 0;             // T; 0 means budget_per_task * N
  double budget_per_task = 15.0;
  int n_prime = 1;
  std::vector<double> checkpoints;     // fractions in (0, 1], ascending
  int runs = 30;
  std::uint64_t base_seed = 0;
  bool timing = false;                 // false: elapsed_ms written as 0
  bool trace = false;
  std::string trace_strategy;          // default: first bbta strategy
  int trace_run = 0;
  int threads = 0;                     // 0: CROWDBANDIT_THREADS or hardware

  static ExperimentConfig from_key_values(const KeyValueConfig& kv,
                                          const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& path);
  // Throws ConfigError / UnknownStrategy on inconsistent settings.
  void validate() const;
};

// 30 evenly spaced fractions k/30.
std::vector<double> default_checkpoints(int count = 30);

// floor(c * T) per checkpoint fraction.
std::vector<std::int64_t> checkpoint_budgets(std::span<const double> fractions, std::int64_t budget);

struct Dataset {
  Problem problem;
  WorkerOracle oracle;
};

// N tasks with balanced (or proportional) contexts, i.i.d. uniform truths,
// and workers from the named model.
Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

// Loads tasks + complete matrix for replay.
Dataset load_replay(const std::filesystem::path& tasks_path,
                    const std::filesystem::path& matrix_path);

// ---------------------------------------------------------------- registry

using StrategyParams = std::map<std::string, std::string>;
using StrategyRunner = std::function<RunOutcome(const Problem&, WorkerOracle&,
                                                const StrategyParams&, const RunOptions&, Rng&)>;

// Throws UnknownStrategy.
const StrategyRunner& find_strategy(const std::string& key);
std::vector<std::string> strategy_keys();
// Rejects parameter names the strategy does not understand.
void check_strategy_params(const std::string& key, const StrategyParams& params);

// ------------------------------------------------------------------ running

struct ResultRow {
  std::string strategy;
  int run = 0;
  std::int64_t budget_spent = 0;
  double accuracy = 0.0;
  double elapsed_ms = 0.0;
};

struct RunRecord {
  std::string strategy;
  int run = 0;
  std::vector<ResultRow> rows;  // one per checkpoint
  std::int64_t labels_acquired = 0;
  bool pool_exhausted = false;
  bool truncated = false;
  std::optional<RegretReport> regret;  // bbta only
  bool traced = false;
  std::vector<StepLog> logs;           // kept for the traced run only
};

struct ExperimentResult {
  std::vector<RunRecord> records;  // ordered by (strategy, run)
  std::vector<std::int64_t> checkpoint_budgets;
  std::int64_t budget = 0;
  int num_contexts = 0;
  int num_workers = 0;
  int num_tasks = 0;

  std::vector<ResultRow> rows() const;
};

std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& stream, int run);

ExperimentResult run_experiment(const ExperimentConfig& config);

// CSV with header `strategy,run,budget_spent,accuracy,elapsed_ms`.
std::string results_csv(const ExperimentResult& result);
// Mean and standard error per (strategy, checkpoint), regret summaries.
std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result);

// Writes results.csv, summary.json and (if enabled) trace.jsonl.
void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& out_dir);

}  // namespace crowdbandit
