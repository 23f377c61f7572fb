#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/errors.hpp"
#include "crowdbandit/special_functions.hpp"

namespace crowdbandit {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Critical values t_{alpha/2}^{(dof)}, filled on first use.
class QuantileCache {
 public:
  explicit QuantileCache(double alpha) : alpha_(alpha) {}

  double operator()(int dof) {
    if (static_cast<std::size_t>(dof) >= values_.size())
      values_.resize(static_cast<std::size_t>(dof) + 1, -1.0);
    double& v = values_[static_cast<std::size_t>(dof)];
    if (v < 0.0) v = student_t_quantile(alpha_ / 2.0, dof);
    return v;
  }

 private:
  double alpha_;
  std::vector<double> values_;
};

// Rewards are 0/1, so the count of ones fixes both moments.
double upper_interval(std::int64_t n, std::int64_t ones, QuantileCache& quantile) {
  if (n < 2) return kInfinity;
  const double nd = static_cast<double>(n);
  const double mean = static_cast<double>(ones) / nd;
  const double variance = static_cast<double>(ones) * (1.0 - mean) / (nd - 1.0);
  const double sd = std::sqrt(std::max(0.0, variance));
  if (sd == 0.0) return mean;
  return mean + quantile(static_cast<int>(n - 1)) * sd / std::sqrt(nd);
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("IEThresh alpha must lie in (0, 1)");
}

}  // namespace

double ie_upper_interval(std::span<const int> rewards, double alpha) {
  check_alpha(alpha);
  std::int64_t ones = 0;
  for (int r : rewards) {
    if (r != 0 && r != 1) throw std::invalid_argument("IEThresh rewards must be 0 or 1");
    ones += r;
  }
  QuantileCache quantile(alpha);
  return upper_interval(static_cast<std::int64_t>(rewards.size()), ones, quantile);
}

std::vector<int> iethresh_subset(std::span<const double> upper_intervals, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw ConfigError("IEThresh epsilon must lie in (0, 1]");
  std::vector<int> subset;
  if (upper_intervals.empty()) return subset;
  const double best = *std::max_element(upper_intervals.begin(), upper_intervals.end());
  const double threshold = std::isinf(best) ? best : epsilon * best;
  for (std::size_t j = 0; j < upper_intervals.size(); ++j)
    if (upper_intervals[j] >= threshold) subset.push_back(static_cast<int>(j));
  return subset;
}

RunOutcome run_iethresh(const Problem& problem, WorkerOracle& oracle, const IethreshParams& params,
                        const RunOptions& options, Rng& rng) {
  problem.validate();
  validate_run_options(options);
  check_alpha(params.alpha);
  if (!(params.epsilon > 0.0 && params.epsilon <= 1.0))
    throw ConfigError("IEThresh epsilon must lie in (0, 1]");
  const int n = problem.num_tasks();
  const int k = problem.num_workers;

  std::vector<std::vector<int>> rewards(static_cast<std::size_t>(k));
  std::vector<std::int64_t> ones(static_cast<std::size_t>(k), 0);
  QuantileCache quantile(params.alpha);
  LabelMatrix labels(n, k);
  std::vector<int> sums(static_cast<std::size_t>(n), 0);
  auto estimates = [&sums] {
    std::vector<Label> out(sums.size());
    for (std::size_t i = 0; i < sums.size(); ++i) out[i] = sign_label(sums[i]);
    return out;
  };

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[uniform_index(rng, static_cast<std::uint64_t>(i) + 1)]);

  RunOutcome outcome;
  CheckpointRecorder recorder(options, estimates);
  recorder.observe(0);
  std::int64_t acquired = 0;
  std::vector<double> ui(static_cast<std::size_t>(k));
  bool done = options.budget == 0;
  while (!done) {
    bool progress = false;
    for (int i : order) {
      if (acquired == options.budget) {
        done = true;
        break;
      }
      for (int j = 0; j < k; ++j)
        ui[j] = upper_interval(static_cast<std::int64_t>(rewards[j].size()), ones[j], quantile);
      std::vector<int> queried;
      for (int j : iethresh_subset(ui, params.epsilon)) {
        if (labels.at(i, j) != kMissing) continue;
        if (acquired == options.budget) {
          outcome.truncated = true;
          done = true;
          break;
        }
        const Label y = oracle.query(i, j);
        labels.set(i, j, y);
        sums[static_cast<std::size_t>(i)] += y;
        ++acquired;
        queried.push_back(j);
        recorder.observe(acquired);
      }
      if (!queried.empty()) {
        progress = true;
        const Label vote = sign_label(sums[static_cast<std::size_t>(i)]);
        for (int j : queried) {
          const int r = labels.at(i, j) == vote ? 1 : 0;
          rewards[j].push_back(r);
          ones[j] += r;
        }
      }
      if (done) break;
    }
    if (!done && !progress) {
      outcome.pool_exhausted = true;
      done = true;
    }
  }
  outcome.labels_acquired = acquired;
  outcome.snapshots = recorder.finish(acquired);
  outcome.estimates = estimates();
  return outcome;
}

}  // namespace crowdbandit
