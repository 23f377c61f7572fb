#include "crowdbandit/bbta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

double learning_rate(std::int64_t t_s, int num_workers) {
  if (num_workers < 2) throw ConfigError("exponential weighting needs K >= 2 workers");
  if (t_s < 1) throw DomainError("learning_rate: context count must be >= 1");
  const double k = static_cast<double>(num_workers);
  return std::sqrt(std::log(k) / (static_cast<double>(t_s) * k));
}

std::vector<double> worker_distribution(std::span<const double> cumulative_losses, double eta) {
  if (cumulative_losses.empty()) throw ConfigError("worker_distribution: no workers");
  for (double l : cumulative_losses)
    if (!std::isfinite(l)) throw InternalError("worker_distribution: non-finite cumulative loss");
  const double min_loss = *std::min_element(cumulative_losses.begin(), cumulative_losses.end());
  std::vector<double> p(cumulative_losses.size());
  double total = 0.0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    p[j] = std::exp(-eta * (cumulative_losses[j] - min_loss));
    total += p[j];
  }
  bool clamped = false;
  for (double& v : p) {
    v /= total;
    if (v < std::numeric_limits<double>::min()) {
      v = std::numeric_limits<double>::min();
      clamped = true;
    }
  }
  if (clamped) {
    total = 0.0;
    for (double v : p) total += v;
    for (double& v : p) v /= total;
  }
  return p;
}

int sample_index(std::span<const double> distribution, Rng& rng) {
  const double u = uniform01(rng);
  double cumulative = 0.0;
  int last_positive = 0;
  for (std::size_t j = 0; j < distribution.size(); ++j) {
    if (distribution[j] <= 0.0) continue;
    cumulative += distribution[j];
    last_positive = static_cast<int>(j);
    if (u < cumulative) return last_positive;
  }
  return last_positive;  // u landed in the rounding gap above the total
}

BbtaState::BbtaState(const Problem& problem, std::int64_t budget)
    : problem_(&problem),
      tasks_by_context_(static_cast<std::size_t>(problem.num_contexts)),
      cumulative_losses_(static_cast<std::size_t>(problem.num_contexts),
                         std::vector<double>(static_cast<std::size_t>(problem.num_workers), 0.0)),
      weights_(static_cast<std::size_t>(problem.num_contexts),
               std::vector<double>(static_cast<std::size_t>(problem.num_workers), 1.0)),
      context_counts_(static_cast<std::size_t>(problem.num_contexts), 0),
      raw_means_(problem.tasks.size(), 0.0),
      labelers_(problem.tasks.size()),
      available_(problem.tasks.size(), 1),
      pool_size_(static_cast<std::int64_t>(problem.tasks.size())),
      labels_(problem.num_tasks(), problem.num_workers),
      remaining_budget_(budget) {
  problem.validate();
  if (budget < 0) throw BudgetError("budget must be non-negative");
  for (const Task& t : problem.tasks)
    tasks_by_context_[static_cast<std::size_t>(t.context.value)].push_back(t.id);
}

int BbtaState::label_count(int task) const {
  return static_cast<int>(labelers_[static_cast<std::size_t>(task)].size());
}

Label BbtaState::acquire(WorkerOracle& oracle, int task, int worker) {
  const Label y = oracle.query(task, worker);
  if (labels_.at(task, worker) == kMissing) {
    labels_.set(task, worker, y);
    labelers_[static_cast<std::size_t>(task)].push_back(worker);
  }
  --remaining_budget_;
  ++labels_acquired_;
  return y;
}

double BbtaState::weighted_mean(int task, std::span<const double> weights) const {
  double den = 0.0;
  for (double w : weights) den += w;
  double num = 0.0;
  for (int j : labelers_[static_cast<std::size_t>(task)]) num += weights[j] * labels_.at(task, j);
  return num / den;
}

void BbtaState::refresh_context(int context) {
  const auto& w = weights_[static_cast<std::size_t>(context)];
  for (int i : tasks_by_context_[static_cast<std::size_t>(context)])
    raw_means_[static_cast<std::size_t>(i)] = weighted_mean(i, w);
}

ExplorationResult BbtaState::pure_exploration(WorkerOracle& oracle, int n_prime, Rng& rng,
                                              CheckpointRecorder* recorder) {
  const int num_contexts = problem_->num_contexts;
  const int k = problem_->num_workers;
  if (n_prime < 0) throw ConfigError("N' must be non-negative");
  if (oracle.num_workers() != k) throw ConfigError("oracle worker count does not match problem");
  for (int s = 0; s < num_contexts; ++s)
    if (static_cast<int>(tasks_by_context_[s].size()) < n_prime)
      throw ConfigError("context " + std::to_string(s) + " has " +
                        std::to_string(tasks_by_context_[s].size()) + " tasks, fewer than N' = " +
                        std::to_string(n_prime));
  const std::int64_t cost = static_cast<std::int64_t>(num_contexts) * k * n_prime;
  if (remaining_budget_ < cost)
    throw BudgetError("budget " + std::to_string(remaining_budget_) +
                      " cannot cover the exploration phase (" + std::to_string(cost) + ")");

  ExplorationResult result;
  result.cumulative_losses = cumulative_losses_;
  if (n_prime == 0) return result;

  const std::vector<double> uniform(static_cast<std::size_t>(k), 1.0);
  for (int s = 0; s < num_contexts; ++s) {
    // Partial Fisher-Yates: the first n_prime entries become the sample.
    std::vector<int> candidates = tasks_by_context_[static_cast<std::size_t>(s)];
    for (int r = 0; r < n_prime; ++r) {
      const auto pick = r + static_cast<int>(uniform_index(rng, candidates.size() - r));
      std::swap(candidates[r], candidates[pick]);
    }
    std::sort(candidates.begin(), candidates.begin() + n_prime);
    for (int r = 0; r < n_prime; ++r) {
      const int i = candidates[static_cast<std::size_t>(r)];
      for (int j = 0; j < k; ++j) {
        acquire(oracle, i, j);
        raw_means_[static_cast<std::size_t>(i)] = weighted_mean(i, uniform);
        if (recorder) recorder->observe(labels_acquired_);
      }
      const Label estimate = majority_vote(labels_.row(i)).estimate;
      for (int j = 0; j < k; ++j)
        cumulative_losses_[s][j] += labels_.at(i, j) != estimate ? 1.0 : 0.0;
      available_[static_cast<std::size_t>(i)] = 0;
      --pool_size_;
      result.explored_tasks.push_back(i);
    }
  }
  result.cumulative_losses = cumulative_losses_;
  result.budget_spent = cost;
  return result;
}

std::optional<int> BbtaState::select_task() const {
  std::optional<int> best;
  double best_conf = 0.0;
  int best_count = 0;
  for (int i = 0; i < problem_->num_tasks(); ++i) {
    if (!available_[static_cast<std::size_t>(i)]) continue;
    const double conf = std::abs(raw_means_[static_cast<std::size_t>(i)]);
    const int count = label_count(i);
    if (!best || conf < best_conf || (conf == best_conf && count < best_count)) {
      best = i;
      best_conf = conf;
      best_count = count;
    }
  }
  return best;
}

StepLog BbtaState::adaptive_step(WorkerOracle& oracle, Rng& rng) {
  if (remaining_budget_ < 1) throw BudgetError("adaptive_step: budget exhausted");
  const auto picked = select_task();
  if (!picked) throw BudgetError("adaptive_step: no task left to label");
  const int i = *picked;
  const int s = problem_->tasks[static_cast<std::size_t>(i)].context.value;
  auto& losses = cumulative_losses_[static_cast<std::size_t>(s)];

  const std::int64_t t_s = ++context_counts_[static_cast<std::size_t>(s)];
  const double eta = learning_rate(t_s, problem_->num_workers);
  std::vector<double> p = worker_distribution(losses, eta);
  const int j = sample_index(p, rng);
  const Label y = acquire(oracle, i, j);

  const Label estimate = sign_label(weighted_mean(i, p));
  const int loss = estimate != y ? 1 : 0;
  losses[static_cast<std::size_t>(j)] += static_cast<double>(loss) / p[static_cast<std::size_t>(j)];

  // Confidence refresh with this step's learning rate on the updated losses.
  weights_[static_cast<std::size_t>(s)] = worker_distribution(losses, eta);
  refresh_context(s);

  if (label_count(i) == problem_->num_workers && available_[static_cast<std::size_t>(i)]) {
    available_[static_cast<std::size_t>(i)] = 0;
    --pool_size_;
  }
  ++adaptive_steps_;

  StepLog log;
  log.step = adaptive_steps_;
  log.task = i;
  log.context = ContextId{s};
  log.distribution = std::move(p);
  log.chosen_worker = j;
  log.chosen_label = y;
  log.realized_loss = loss;
  log.counterfactual_labels = oracle.query_all(i);
  return log;
}

std::vector<Label> BbtaState::estimates() const {
  std::vector<Label> out(raw_means_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = sign_label(raw_means_[i]);
  return out;
}

RunOutcome run_bbta(const Problem& problem, WorkerOracle& oracle, const BbtaParams& params,
                    const RunOptions& options, Rng& rng) {
  validate_run_options(options);
  if (problem.num_workers < 2) throw ConfigError("BBTA needs K >= 2 workers");
  BbtaState state(problem, options.budget);
  CheckpointRecorder recorder(options, [&state] { return state.estimates(); });
  recorder.observe(0);

  RunOutcome outcome;
  state.pure_exploration(oracle, params.n_prime, rng, &recorder);
  while (state.remaining_budget() > 0) {
    if (state.pool_size() == 0) {
      outcome.pool_exhausted = true;
      break;
    }
    outcome.logs.push_back(state.adaptive_step(oracle, rng));
    recorder.observe(state.labels_acquired());
  }
  outcome.labels_acquired = state.labels_acquired();
  outcome.snapshots = recorder.finish(state.labels_acquired());
  outcome.estimates = state.estimates();
  return outcome;
}

}  // namespace crowdbandit
