#include <algorithm>
#include <cmath>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/errors.hpp"
#include "crowdbandit/special_functions.hpp"

namespace crowdbandit {

namespace {

double h(double x) { return std::max(x, 1.0 - x); }

}  // namespace

StageRewards optkg_stage_rewards(double a, double b) {
  const double base = h(beta_tail_at_half(a, b));
  return {h(beta_tail_at_half(a + 1.0, b)) - base, h(beta_tail_at_half(a, b + 1.0)) - base};
}

OptkgState::OptkgState(int num_tasks, double prior_a, double prior_b)
    : a_(static_cast<std::size_t>(num_tasks), prior_a),
      b_(static_cast<std::size_t>(num_tasks), prior_b),
      priority_(static_cast<std::size_t>(num_tasks)) {
  if (!(prior_a > 0.0) || !(prior_b > 0.0)) throw DomainError("Beta prior must be positive");
  if (num_tasks > 0) std::fill(priority_.begin(), priority_.end(), priority(0));
}

double OptkgState::priority(int task) const {
  const auto r = optkg_stage_rewards(a_[task], b_[task]);
  return std::max(r.positive, r.negative);
}

int OptkgState::select_task() const {
  if (priority_.empty()) throw ConfigError("OptKG needs at least one task");
  return static_cast<int>(std::max_element(priority_.begin(), priority_.end()) -
                          priority_.begin());
}

void OptkgState::update(int task, Label y) {
  if (y == 1)
    a_[task] += 1.0;
  else if (y == -1)
    b_[task] += 1.0;
  else
    throw InvalidLabel("OptKG update needs a label of -1 or +1");
  priority_[task] = priority(task);
  ++stages_;
}

std::vector<Label> OptkgState::estimates() const {
  std::vector<Label> out(a_.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a_[i] >= b_[i] ? 1 : -1;
  return out;
}

std::vector<std::int64_t> split_budget(std::int64_t budget, std::span<const int> context_sizes) {
  if (budget < 0) throw BudgetError("budget must be non-negative");
  std::int64_t total = 0;
  for (int n : context_sizes) total += n;
  std::vector<std::int64_t> out(context_sizes.size(), 0);
  if (total == 0) return out;
  std::vector<std::int64_t> remainder(context_sizes.size());
  std::int64_t assigned = 0;
  for (std::size_t s = 0; s < context_sizes.size(); ++s) {
    const std::int64_t scaled = budget * context_sizes[s];
    out[s] = scaled / total;
    remainder[s] = scaled % total;
    assigned += out[s];
  }
  std::vector<std::size_t> by_remainder(context_sizes.size());
  for (std::size_t s = 0; s < by_remainder.size(); ++s) by_remainder[s] = s;
  std::stable_sort(by_remainder.begin(), by_remainder.end(),
                   [&](std::size_t x, std::size_t y) { return remainder[x] > remainder[y]; });
  for (std::size_t r = 0; assigned < budget; ++r, ++assigned) ++out[by_remainder[r]];
  return out;
}

namespace {

// Independent OptKG instances over disjoint task groups sharing one label
// stream. Each label goes to the group furthest behind its own budget.
RunOutcome run_groups(const Problem& problem, WorkerOracle& oracle,
                      const std::vector<std::vector<int>>& groups,
                      const std::vector<std::int64_t>& budgets, const RunOptions& options,
                      Rng& rng) {
  problem.validate();
  validate_run_options(options);
  std::vector<OptkgState> states;
  states.reserve(groups.size());
  for (const auto& g : groups) states.emplace_back(static_cast<int>(g.size()));
  std::vector<std::int64_t> spent(groups.size(), 0);

  auto estimates = [&] {
    std::vector<Label> out(static_cast<std::size_t>(problem.num_tasks()), 1);
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto local = states[g].estimates();
      for (std::size_t r = 0; r < local.size(); ++r) out[groups[g][r]] = local[r];
    }
    return out;
  };

  CheckpointRecorder recorder(options, estimates);
  recorder.observe(0);
  const auto k = static_cast<std::uint64_t>(problem.num_workers);
  std::int64_t acquired = 0;
  while (acquired < options.budget) {
    std::size_t next = groups.size();
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (spent[g] >= budgets[g] || groups[g].empty()) continue;
      // spent_g / budget_g < spent_next / budget_next, cross-multiplied.
      if (next == groups.size() || spent[g] * budgets[next] < spent[next] * budgets[g]) next = g;
    }
    if (next == groups.size()) break;
    const int local = states[next].select_task();
    const int task = groups[next][static_cast<std::size_t>(local)];
    const int worker = static_cast<int>(uniform_index(rng, k));
    states[next].update(local, oracle.query(task, worker));
    ++spent[next];
    ++acquired;
    recorder.observe(acquired);
  }

  RunOutcome outcome;
  outcome.labels_acquired = acquired;
  outcome.pool_exhausted = acquired < options.budget;
  outcome.snapshots = recorder.finish(acquired);
  outcome.estimates = estimates();
  return outcome;
}

}  // namespace

RunOutcome run_optkg(const Problem& problem, WorkerOracle& oracle, const RunOptions& options,
                     Rng& rng) {
  std::vector<int> all(static_cast<std::size_t>(problem.num_tasks()));
  for (int i = 0; i < problem.num_tasks(); ++i) all[i] = i;
  if (options.budget < 1) throw BudgetError("OptKG needs a budget of at least 1");
  if (all.empty()) throw ConfigError("OptKG needs at least one task");
  return run_groups(problem, oracle, {all}, {options.budget}, options, rng);
}

RunOutcome run_optkg_multi(const Problem& problem, WorkerOracle& oracle, const RunOptions& options,
                           Rng& rng) {
  if (problem.num_contexts < 1) throw ConfigError("OptKG (multi) needs S >= 1");
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(problem.num_contexts));
  for (const Task& t : problem.tasks) groups[t.context.value].push_back(t.id);
  const auto budgets = split_budget(options.budget, problem.context_sizes());
  return run_groups(problem, oracle, groups, budgets, options, rng);
}

}  // namespace crowdbandit
