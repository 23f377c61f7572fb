#pragma once

// Comparison strategies: IEThresh and CrowdSense (worker-subset sampling per
// task), optimistic knowledge gradient (OptKG) and its per-context budget
// split, and uniformly random task-worker pairs with majority voting.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "crowdbandit/core.hpp"
#include "crowdbandit/rng.hpp"
#include "crowdbandit/run.hpp"
#include "crowdbandit/workers.hpp"

namespace crowdbandit {

// ---------------------------------------------------------------- IEThresh

struct IethreshParams {
  double alpha = 0.05;
  double epsilon = 0.8;
};

// Upper end of the interval estimate m + t_{alpha/2, n-1} s / sqrt(n) of a
// 0/1 reward history; +infinity for fewer than two rewards.
double ie_upper_interval(std::span<const int> rewards, double alpha);

// Workers j with UI_j >= epsilon * max UI, ascending.
std::vector<int> iethresh_subset(std::span<const double> upper_intervals, double epsilon);

RunOutcome run_iethresh(const Problem& problem, WorkerOracle& oracle, const IethreshParams& params,
                        const RunOptions& options, Rng& rng);

// -------------------------------------------------------------- CrowdSense

struct CrowdsenseParams {
  double smoothing = 100.0;
  double epsilon = 0.2;
};

// (a + K_s) / (c + 2 K_s).
double crowdsense_quality(double agreements, double labels, double smoothing);

// Whether candidate l joins a subset of size `subset_size` whose current
// score is `score`: (|score| - Q_l) / (|S| + 1) < epsilon.
bool crowdsense_admits(double score, double candidate_quality, int subset_size, double epsilon);

RunOutcome run_crowdsense(const Problem& problem, WorkerOracle& oracle,
                          const CrowdsenseParams& params, const RunOptions& options, Rng& rng);

// ------------------------------------------------------------------ OptKG

struct StageRewards {
  double positive = 0.0;  // R1: reward of observing +1
  double negative = 0.0;  // R2: reward of observing -1
};

// h(I(a+1,b)) - h(I(a,b)) and h(I(a,b+1)) - h(I(a,b)), h(x) = max(x, 1-x).
StageRewards optkg_stage_rewards(double a, double b);

// Beta posterior per task, starting from Beta(1, 1).
class OptkgState {
 public:
  explicit OptkgState(int num_tasks, double prior_a = 1.0, double prior_b = 1.0);

  int num_tasks() const { return static_cast<int>(a_.size()); }
  double a(int task) const { return a_[task]; }
  double b(int task) const { return b_[task]; }
  std::int64_t stages() const { return stages_; }

  // argmax_i max(R1, R2); ties to the lowest id.
  int select_task() const;
  void update(int task, Label y);
  // +1 on the positive set {a >= b}, -1 elsewhere.
  std::vector<Label> estimates() const;

 private:
  double priority(int task) const;

  std::vector<double> a_;
  std::vector<double> b_;
  std::vector<double> priority_;
  std::int64_t stages_ = 0;
};

RunOutcome run_optkg(const Problem& problem, WorkerOracle& oracle, const RunOptions& options,
                     Rng& rng);

// Per-context sub-budgets floor(T N_s / N) with the leftover units handed
// out by largest fractional remainder (ties to the lower context).
std::vector<std::int64_t> split_budget(std::int64_t budget, std::span<const int> context_sizes);

// One OptKG instance per context, each held to its sub-budget. Labels are
// interleaved so every instance has spent about the same share of its
// sub-budget at any checkpoint.
RunOutcome run_optkg_multi(const Problem& problem, WorkerOracle& oracle, const RunOptions& options,
                           Rng& rng);

// ----------------------------------------------------------------- Random

// T distinct (task, worker) pairs uniformly without replacement, majority
// vote per task. Throws BudgetError if T > N K.
RunOutcome run_random_majority(const Problem& problem, WorkerOracle& oracle,
                               const RunOptions& options, Rng& rng);

}  // namespace crowdbandit
