#include <numeric>
#include <string>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/errors.hpp"

namespace crowdbandit {

RunOutcome run_random_majority(const Problem& problem, WorkerOracle& oracle,
                               const RunOptions& options, Rng& rng) {
  problem.validate();
  validate_run_options(options);
  const std::int64_t n = problem.num_tasks();
  const std::int64_t k = problem.num_workers;
  if (options.budget > n * k)
    throw BudgetError("random baseline: budget " + std::to_string(options.budget) +
                      " exceeds the " + std::to_string(n * k) + " distinct task-worker pairs");

  std::vector<int> sums(static_cast<std::size_t>(n), 0);
  auto estimates = [&sums] {
    std::vector<Label> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sign_label(sums[i]);
    return out;
  };

  // Lazy Fisher-Yates over pair indices task * K + worker.
  std::vector<std::int64_t> pairs(static_cast<std::size_t>(n * k));
  std::iota(pairs.begin(), pairs.end(), std::int64_t{0});

  CheckpointRecorder recorder(options, estimates);
  recorder.observe(0);
  for (std::int64_t t = 0; t < options.budget; ++t) {
    const auto pick = t + static_cast<std::int64_t>(
                              uniform_index(rng, static_cast<std::uint64_t>(n * k - t)));
    std::swap(pairs[t], pairs[pick]);
    const int task = static_cast<int>(pairs[t] / k);
    const int worker = static_cast<int>(pairs[t] % k);
    sums[static_cast<std::size_t>(task)] += oracle.query(task, worker);
    recorder.observe(t + 1);
  }

  RunOutcome outcome;
  outcome.labels_acquired = options.budget;
  outcome.snapshots = recorder.finish(options.budget);
  outcome.estimates = estimates();
  return outcome;
}

}  // namespace crowdbandit
