#pragma once

// Simulated and replayed crowd workers.
//
// A stochastic worker answers task i correctly with an accuracy that depends
// on the task's context. The label for a (task, worker) pair is realized at
// its first query from a private substream keyed by (seed, task, worker) and
// cached, so the order of queries never changes which labels come out.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "crowdbandit/core.hpp"

namespace crowdbandit {

struct WorkerProfile {
  std::vector<double> accuracy;  // per context, each in [0, 1]
};

class WorkerOracle {
 public:
  // Stochastic workers answering the tasks of `problem`. Requires a true
  // label on every task and one profile (of S entries) per worker.
  WorkerOracle(const Problem& problem, std::vector<WorkerProfile> profiles, std::uint64_t seed);

  // Replays a complete matrix (rows = tasks, columns = workers).
  // Throws IncompleteMatrix if any entry is 0.
  explicit WorkerOracle(LabelMatrix matrix);

  int num_workers() const { return num_workers_; }
  int num_tasks() const { return cache_.rows(); }
  bool is_replay() const { return profiles_.empty(); }
  const std::vector<WorkerProfile>& profiles() const { return profiles_; }

  // Label of `worker` on `task`; identical on every call.
  Label query(int task, int worker);

  // Every worker's label on `task`.
  std::vector<Label> query_all(int task);

  // Labels realized so far (replay: the full matrix).
  const LabelMatrix& realized() const { return cache_; }

 private:
  std::vector<WorkerProfile> profiles_;
  std::vector<ContextId> contexts_;
  std::vector<Label> truths_;
  std::uint64_t seed_ = 0;
  int num_workers_ = 0;
  LabelMatrix cache_;
};

// Default round-robin expertise: worker j is expert on context j mod S.
std::vector<int> round_robin_assignment(int num_workers, int num_contexts, int offset = 0);

// Hammer (accuracy 1) on the assigned context, spammer (0.5) elsewhere.
WorkerOracle make_spammer_hammer(const Problem& problem, std::span<const int> expert_context,
                                 std::uint64_t seed);

WorkerOracle make_one_coin(const Problem& problem, std::span<const int> expert_context,
                           std::uint64_t seed, double p_expert = 0.9, double p_other = 0.6);

// 0.9 on the good context, 0.3 on the bad one, 0.6 elsewhere. Needs S >= 2
// and good != bad for every worker.
WorkerOracle make_one_coin_malicious(const Problem& problem, std::span<const int> good_context,
                                     std::span<const int> bad_context, std::uint64_t seed);

// Perfect workers on every context.
WorkerOracle make_hammers(const Problem& problem, std::uint64_t seed);

WorkerOracle make_replay(LabelMatrix matrix);

// Per-worker fraction of correct labels over `tasks`. Stochastic oracles
// report the expectation implied by their profiles; replay oracles count.
std::vector<double> true_accuracy(WorkerOracle& oracle, std::span<const Task> tasks);

// Counts of accuracies per right-closed bin (k*w, (k+1)*w]; 0 falls into
// the first bin. Requires 1/bin_width to be an integer.
std::vector<int> accuracy_histogram(std::span<const double> accuracies, double bin_width = 0.05);

// Worker model names accepted by the harness.
WorkerOracle make_worker_model(const std::string& model, const Problem& problem,
                               std::uint64_t seed);

}  // namespace crowdbandit
