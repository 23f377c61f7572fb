#pragma once

// Pieces shared by every strategy runner: the budget cap, checkpoint
// snapshots of the current estimates, and the outcome record.

#include <chrono>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "crowdbandit/core.hpp"

namespace crowdbandit {

// One BBTA adaptive step.
struct StepLog {
  std::int64_t step = 0;  // 1-based index within the adaptive phase
  int task = 0;
  ContextId context;
  std::vector<double> distribution;
  int chosen_worker = 0;
  Label chosen_label = 1;
  int realized_loss = 0;
  std::vector<Label> counterfactual_labels;

  // The weighted-vote estimate of the task right after the step.
  Label estimate() const {
    return realized_loss ? static_cast<Label>(-chosen_label) : chosen_label;
  }
};

struct RunOptions {
  std::int64_t budget = 0;
  // Label counts at which estimates are snapshotted; sorted ascending, each
  // in [0, budget].
  std::vector<std::int64_t> checkpoints;
};

struct Snapshot {
  std::int64_t budget_spent = 0;
  std::vector<Label> estimates;
  double elapsed_ms = 0.0;
};

struct RunOutcome {
  std::vector<Snapshot> snapshots;  // one per checkpoint, same order
  std::vector<Label> estimates;     // final
  std::int64_t labels_acquired = 0;
  bool pool_exhausted = false;  // stopped early: nothing left to label
  bool truncated = false;       // a worker subset was cut short by the cap
  std::vector<StepLog> logs;    // BBTA only
};

// Records estimates each time the label count crosses a checkpoint.
class CheckpointRecorder {
 public:
  using EstimateFn = std::function<std::vector<Label>()>;

  CheckpointRecorder(const RunOptions& options, EstimateFn estimates);

  // Call after every acquired label (and once before the first).
  void observe(std::int64_t labels_acquired);

  // Fills the snapshots of checkpoints never reached with the final state.
  std::vector<Snapshot> finish(std::int64_t labels_acquired);

 private:
  std::vector<std::int64_t> checkpoints_;
  EstimateFn estimates_;
  std::vector<Snapshot> snapshots_;
  std::chrono::steady_clock::time_point start_;
};

void validate_run_options(const RunOptions& options);

}  // namespace crowdbandit
