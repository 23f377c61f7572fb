#include "crowdbandit/workers.hpp"

#include <algorithm>
#include <cmath>

#include "crowdbandit/errors.hpp"
#include "crowdbandit/rng.hpp"

namespace crowdbandit {

WorkerOracle::WorkerOracle(const Problem& problem, std::vector<WorkerProfile> profiles,
                           std::uint64_t seed)
    : profiles_(std::move(profiles)),
      seed_(seed),
      num_workers_(static_cast<int>(profiles_.size())),
      cache_(problem.num_tasks(), static_cast<int>(profiles_.size())) {
  if (profiles_.empty()) throw ConfigError("worker oracle needs at least one worker");
  for (const auto& p : profiles_) {
    if (static_cast<int>(p.accuracy.size()) != problem.num_contexts)
      throw ConfigError("worker profile must have one accuracy per context");
    for (double a : p.accuracy)
      if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("worker accuracy must lie in [0, 1]");
  }
  contexts_.reserve(problem.tasks.size());
  truths_.reserve(problem.tasks.size());
  for (const Task& t : problem.tasks) {
    if (!t.true_label) throw ConfigError("simulated workers need a true label on every task");
    contexts_.push_back(t.context);
    truths_.push_back(*t.true_label);
  }
}

WorkerOracle::WorkerOracle(LabelMatrix matrix)
    : num_workers_(matrix.cols()), cache_(std::move(matrix)) {
  if (!cache_.complete()) throw IncompleteMatrix("replay matrix contains missing (0) entries");
}

Label WorkerOracle::query(int task, int worker) {
  if (task < 0 || task >= cache_.rows() || worker < 0 || worker >= num_workers_)
    throw std::out_of_range("worker query out of range");
  const Label cached = cache_.at(task, worker);
  if (cached != kMissing) return cached;
  const std::uint64_t key =
      hash_combine(hash_combine(seed_, static_cast<std::uint64_t>(task)),
                   static_cast<std::uint64_t>(worker));
  const double u = uniform01(splitmix64(key));
  const double acc =
      profiles_[static_cast<std::size_t>(worker)].accuracy[contexts_[task].value];
  const Label truth = truths_[static_cast<std::size_t>(task)];
  const Label y = u < acc ? truth : static_cast<Label>(-truth);
  cache_.set(task, worker, y);
  return y;
}

std::vector<Label> WorkerOracle::query_all(int task) {
  std::vector<Label> out(static_cast<std::size_t>(num_workers_));
  for (int j = 0; j < num_workers_; ++j) out[j] = query(task, j);
  return out;
}

std::vector<int> round_robin_assignment(int num_workers, int num_contexts, int offset) {
  if (num_contexts < 1) throw ConfigError("need at least one context");
  std::vector<int> out(static_cast<std::size_t>(num_workers));
  for (int j = 0; j < num_workers; ++j) out[j] = (j + offset) % num_contexts;
  return out;
}

namespace {

void check_assignment(std::span<const int> assignment, const Problem& problem) {
  if (static_cast<int>(assignment.size()) != problem.num_workers)
    throw ConfigError("expertise assignment must list one context per worker");
  for (int s : assignment)
    if (s < 0 || s >= problem.num_contexts)
      throw ConfigError("expertise assignment names a context out of range");
}

WorkerOracle two_level(const Problem& problem, std::span<const int> expert_context,
                       std::uint64_t seed, double p_expert, double p_other) {
  check_assignment(expert_context, problem);
  std::vector<WorkerProfile> profiles;
  profiles.reserve(expert_context.size());
  for (int s : expert_context) {
    WorkerProfile p{std::vector<double>(static_cast<std::size_t>(problem.num_contexts), p_other)};
    p.accuracy[s] = p_expert;
    profiles.push_back(std::move(p));
  }
  return WorkerOracle(problem, std::move(profiles), seed);
}

}  // namespace

WorkerOracle make_spammer_hammer(const Problem& problem, std::span<const int> expert_context,
                                 std::uint64_t seed) {
  return two_level(problem, expert_context, seed, 1.0, 0.5);
}

WorkerOracle make_one_coin(const Problem& problem, std::span<const int> expert_context,
                           std::uint64_t seed, double p_expert, double p_other) {
  return two_level(problem, expert_context, seed, p_expert, p_other);
}

WorkerOracle make_one_coin_malicious(const Problem& problem, std::span<const int> good_context,
                                     std::span<const int> bad_context, std::uint64_t seed) {
  if (problem.num_contexts < 2) throw ConfigError("malicious one-coin model needs S >= 2");
  check_assignment(good_context, problem);
  check_assignment(bad_context, problem);
  std::vector<WorkerProfile> profiles;
  for (std::size_t j = 0; j < good_context.size(); ++j) {
    if (good_context[j] == bad_context[j])
      throw ConfigError("worker " + std::to_string(j) + " has the same good and bad context");
    WorkerProfile p{std::vector<double>(static_cast<std::size_t>(problem.num_contexts), 0.6)};
    p.accuracy[good_context[j]] = 0.9;
    p.accuracy[bad_context[j]] = 0.3;
    profiles.push_back(std::move(p));
  }
  return WorkerOracle(problem, std::move(profiles), seed);
}

WorkerOracle make_hammers(const Problem& problem, std::uint64_t seed) {
  std::vector<WorkerProfile> profiles(
      static_cast<std::size_t>(problem.num_workers),
      WorkerProfile{std::vector<double>(static_cast<std::size_t>(problem.num_contexts), 1.0)});
  return WorkerOracle(problem, std::move(profiles), seed);
}

WorkerOracle make_replay(LabelMatrix matrix) { return WorkerOracle(std::move(matrix)); }

std::vector<double> true_accuracy(WorkerOracle& oracle, std::span<const Task> tasks) {
  std::vector<double> out(static_cast<std::size_t>(oracle.num_workers()), 0.0);
  if (tasks.empty()) return out;
  for (const Task& t : tasks)
    if (!t.true_label) throw ConfigError("true_accuracy needs a true label on every task");
  for (int j = 0; j < oracle.num_workers(); ++j) {
    double total = 0.0;
    for (const Task& t : tasks) {
      if (oracle.is_replay())
        total += oracle.query(t.id, j) == *t.true_label ? 1.0 : 0.0;
      else
        total += oracle.profiles()[j].accuracy[t.context.value];
    }
    out[j] = total / static_cast<double>(tasks.size());
  }
  return out;
}

std::vector<int> accuracy_histogram(std::span<const double> accuracies, double bin_width) {
  const double bins_real = 1.0 / bin_width;
  const int bins = static_cast<int>(std::lround(bins_real));
  if (!(bin_width > 0.0) || std::abs(bins_real - bins) > 1e-9)
    throw ConfigError("histogram bin width must divide 1");
  std::vector<int> counts(static_cast<std::size_t>(bins), 0);
  for (double a : accuracies) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("accuracy outside [0, 1]");
    // Right-closed: a lands in bin k when k*w < a <= (k+1)*w. The small
    // slack absorbs representation error on exact edges such as 0.65.
    int k = static_cast<int>(std::ceil(a / bin_width - 1e-9)) - 1;
    k = std::clamp(k, 0, bins - 1);
    ++counts[static_cast<std::size_t>(k)];
  }
  return counts;
}

WorkerOracle make_worker_model(const std::string& model, const Problem& problem,
                               std::uint64_t seed) {
  const auto primary = round_robin_assignment(problem.num_workers, problem.num_contexts);
  if (model == "spammer-hammer") return make_spammer_hammer(problem, primary, seed);
  if (model == "one-coin") return make_one_coin(problem, primary, seed);
  if (model == "one-coin-malicious") {
    const auto bad = round_robin_assignment(problem.num_workers, problem.num_contexts, 1);
    return make_one_coin_malicious(problem, primary, bad, seed);
  }
  if (model == "hammer") return make_hammers(problem, seed);
  throw ConfigError("unknown worker model '" + model + "'");
}

}  // namespace crowdbandit
