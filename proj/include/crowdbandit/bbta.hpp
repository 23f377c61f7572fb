#pragma once

// Bandit-based task assignment.
//
// A pure-exploration prefix asks every worker to label N' tasks of each
// context and scores each worker by its disagreements with the majority
// vote. The adaptive phase then repeatedly takes the least-confident open
// task, draws a worker from exponential weights over that context's
// cumulative losses, and charges the drawn worker an importance-weighted
// loss (its disagreement with the updated weighted vote divided by its
// selection probability).

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crowdbandit/core.hpp"
#include "crowdbandit/rng.hpp"
#include "crowdbandit/run.hpp"
#include "crowdbandit/workers.hpp"

namespace crowdbandit {

struct BbtaParams {
  int n_prime = 1;  // exploration tasks per context
};

struct ExplorationResult {
  std::vector<std::vector<double>> cumulative_losses;  // S x K
  std::vector<int> explored_tasks;
  std::int64_t budget_spent = 0;
};

// sqrt(ln K / (t_s K)); throws ConfigError for K < 2 and DomainError for t_s < 1.
double learning_rate(std::int64_t t_s, int num_workers);

// p_j proportional to exp(-eta L_j), min-shifted. Entries that underflow are
// raised to the smallest positive normal and the vector renormalized.
std::vector<double> worker_distribution(std::span<const double> cumulative_losses, double eta);

// Draws an index from a probability vector by inverting its CDF.
int sample_index(std::span<const double> distribution, Rng& rng);

class BbtaState {
 public:
  BbtaState(const Problem& problem, std::int64_t budget);

  const Problem& problem() const { return *problem_; }
  int num_workers() const { return problem_->num_workers; }

  // Runs the exploration phase, spending S*K*N' labels. Explored tasks leave
  // the adaptive pool. Throws ConfigError if a context has fewer than N'
  // tasks and BudgetError if the budget is below S*K*N'.
  ExplorationResult pure_exploration(WorkerOracle& oracle, int n_prime, Rng& rng,
                                     CheckpointRecorder* recorder = nullptr);

  // Least-confident open task; ties go to fewer collected labels, then the
  // lower id. Empty optional when the pool is exhausted.
  std::optional<int> select_task() const;

  // One adaptive step. Requires remaining budget and a non-empty pool.
  StepLog adaptive_step(WorkerOracle& oracle, Rng& rng);

  // Current estimate of every task: sign of its weighted vote under the
  // latest weights of its context.
  std::vector<Label> estimates() const;

  std::span<const double> cumulative_losses(int context) const {
    return cumulative_losses_[static_cast<std::size_t>(context)];
  }
  std::span<const double> context_weights(int context) const {
    return weights_[static_cast<std::size_t>(context)];
  }
  std::int64_t context_count(int context) const { return context_counts_[context]; }
  double confidence(int task) const { return std::abs(raw_means_[task]); }
  double raw_mean(int task) const { return raw_means_[task]; }
  int label_count(int task) const;
  bool available(int task) const { return available_[task]; }
  std::int64_t pool_size() const { return pool_size_; }
  std::int64_t remaining_budget() const { return remaining_budget_; }
  std::int64_t labels_acquired() const { return labels_acquired_; }
  std::int64_t adaptive_steps() const { return adaptive_steps_; }
  const LabelMatrix& labels() const { return labels_; }

 private:
  // Records worker j's label on task i and charges one budget unit.
  Label acquire(WorkerOracle& oracle, int task, int worker);
  double weighted_mean(int task, std::span<const double> weights) const;
  void refresh_context(int context);

  const Problem* problem_;
  std::vector<std::vector<int>> tasks_by_context_;
  std::vector<std::vector<double>> cumulative_losses_;
  std::vector<std::vector<double>> weights_;
  std::vector<std::int64_t> context_counts_;
  std::vector<double> raw_means_;
  std::vector<std::vector<int>> labelers_;  // workers that labeled each task
  std::vector<char> available_;
  std::int64_t pool_size_ = 0;
  LabelMatrix labels_;
  std::int64_t remaining_budget_ = 0;
  std::int64_t labels_acquired_ = 0;
  std::int64_t adaptive_steps_ = 0;
};

// Full run: exploration then up to T - S*K*N' adaptive steps (fewer only if
// every task ends up labeled by every worker).
RunOutcome run_bbta(const Problem& problem, WorkerOracle& oracle, const BbtaParams& params,
                    const RunOptions& options, Rng& rng);

}  // namespace crowdbandit
