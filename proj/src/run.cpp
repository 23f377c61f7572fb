#include "crowdbandit/run.hpp"

#include <algorithm>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

void validate_run_options(const RunOptions& options) {
  if (options.budget < 0) throw BudgetError("budget must be non-negative");
  if (!std::is_sorted(options.checkpoints.begin(), options.checkpoints.end()))
    throw ConfigError("checkpoints must be sorted");
  for (auto c : options.checkpoints)
    if (c < 0 || c > options.budget) throw ConfigError("checkpoint outside [0, budget]");
}

CheckpointRecorder::CheckpointRecorder(const RunOptions& options, EstimateFn estimates)
    : checkpoints_(options.checkpoints),
      estimates_(std::move(estimates)),
      start_(std::chrono::steady_clock::now()) {
  snapshots_.reserve(checkpoints_.size());
}

void CheckpointRecorder::observe(std::int64_t labels_acquired) {
  while (snapshots_.size() < checkpoints_.size() &&
         checkpoints_[snapshots_.size()] <= labels_acquired) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    snapshots_.push_back(
        {labels_acquired, estimates_(),
         std::chrono::duration<double, std::milli>(elapsed).count()});
  }
}

std::vector<Snapshot> CheckpointRecorder::finish(std::int64_t labels_acquired) {
  observe(labels_acquired);
  while (snapshots_.size() < checkpoints_.size()) {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    snapshots_.push_back(
        {labels_acquired, estimates_(),
         std::chrono::duration<double, std::milli>(elapsed).count()});
  }
  return std::move(snapshots_);
}

}  // namespace crowdbandit
