#include <algorithm>
#include <cmath>
#include <numeric>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/errors.hpp"

namespace crowdbandit {

double crowdsense_quality(double agreements, double labels, double smoothing) {
  if (agreements < 0.0 || agreements > labels)
    throw std::invalid_argument("CrowdSense quality needs 0 <= a <= c");
  return (agreements + smoothing) / (labels + 2.0 * smoothing);
}

bool crowdsense_admits(double score, double candidate_quality, int subset_size, double epsilon) {
  return (std::abs(score) - candidate_quality) / (subset_size + 1) < epsilon;
}

RunOutcome run_crowdsense(const Problem& problem, WorkerOracle& oracle,
                          const CrowdsenseParams& params, const RunOptions& options, Rng& rng) {
  problem.validate();
  validate_run_options(options);
  const int n = problem.num_tasks();
  const int k = problem.num_workers;
  if (k < 3) throw ConfigError("CrowdSense needs K >= 3 workers");
  if (!(params.epsilon > 0.0)) throw ConfigError("CrowdSense epsilon must be positive");
  if (!(params.smoothing > 0.0)) throw ConfigError("CrowdSense smoothing must be positive");

  std::vector<std::int64_t> agreements(static_cast<std::size_t>(k), 0);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(k), 0);
  std::vector<double> quality(static_cast<std::size_t>(k));
  auto refresh_quality = [&] {
    for (int j = 0; j < k; ++j)
      quality[j] = crowdsense_quality(static_cast<double>(agreements[j]),
                                      static_cast<double>(counts[j]), params.smoothing);
  };
  refresh_quality();

  LabelMatrix labels(n, k);
  std::vector<std::vector<int>> subsets(static_cast<std::size_t>(n));
  std::vector<Label> current(static_cast<std::size_t>(n), 1);
  auto estimates = [&current] { return current; };

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i)
    std::swap(order[i], order[uniform_index(rng, static_cast<std::uint64_t>(i) + 1)]);

  RunOutcome outcome;
  CheckpointRecorder recorder(options, estimates);
  recorder.observe(0);
  std::int64_t acquired = 0;

  // Workers by descending quality; equal qualities in random order.
  auto by_quality = [&](std::vector<int> workers) {
    std::vector<std::uint64_t> tiebreak(static_cast<std::size_t>(k));
    for (auto& t : tiebreak) t = rng();
    std::sort(workers.begin(), workers.end(), [&](int x, int y) {
      if (quality[x] != quality[y]) return quality[x] > quality[y];
      return tiebreak[x] < tiebreak[y];
    });
    return workers;
  };

  bool done = options.budget == 0;
  while (!done) {
    bool progress = false;
    for (int i : order) {
      if (acquired == options.budget) {
        done = true;
        break;
      }
      auto& subset = subsets[static_cast<std::size_t>(i)];
      const std::size_t before = subset.size();
      double score = 0.0;
      for (int j : subset) score += labels.at(i, j) * quality[j];

      auto ask = [&](int j) {
        if (acquired == options.budget) {
          outcome.truncated = true;
          done = true;
          return false;
        }
        const Label y = oracle.query(i, j);
        labels.set(i, j, y);
        subset.push_back(j);
        score += y * quality[j];
        current[static_cast<std::size_t>(i)] = sign_label(score);
        ++acquired;
        recorder.observe(acquired);
        return true;
      };

      if (subset.empty()) {
        std::vector<int> all(static_cast<std::size_t>(k));
        std::iota(all.begin(), all.end(), 0);
        const auto ranked = by_quality(std::move(all));
        const int third = ranked[2 + uniform_index(rng, static_cast<std::uint64_t>(k - 2))];
        for (int j : {ranked[0], ranked[1], third})
          if (!ask(j)) break;
      }
      if (!done) {
        std::vector<int> rest;
        for (int j = 0; j < k; ++j)
          if (labels.at(i, j) == kMissing) rest.push_back(j);
        for (int l : by_quality(std::move(rest))) {
          if (!crowdsense_admits(score, quality[l], static_cast<int>(subset.size()),
                                 params.epsilon))
            continue;
          if (!ask(l)) break;
        }
      }

      if (subset.size() > before) {
        progress = true;
        const Label vote = sign_label(score);
        current[static_cast<std::size_t>(i)] = vote;
        for (std::size_t q = before; q < subset.size(); ++q) {
          const int j = subset[q];
          ++counts[j];
          agreements[j] += labels.at(i, j) == vote ? 1 : 0;
        }
        refresh_quality();
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
  outcome.estimates = current;
  return outcome;
}

}  // namespace crowdbandit
