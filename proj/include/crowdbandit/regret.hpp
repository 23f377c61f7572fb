#pragma once

// Empirical regret of a BBTA run against the best fixed context-to-worker
// mapping in hindsight, and the closed-form regret bounds.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "crowdbandit/run.hpp"

namespace crowdbandit {

struct RegretReport {
  double empirical_regret = 0.0;
  double theorem_bound = 0.0;
  std::optional<double> lemma_bound;  // single-context runs only
  std::vector<int> per_context_best_worker;
};

// Losses are scored against each step's logged estimate. Contexts absent
// from the log report worker 0. Throws std::invalid_argument if a log lacks
// counterfactual labels.
RegretReport empirical_regret(std::span<const StepLog> logs, int num_contexts);

// 2 sqrt((T - S K N') S K ln K) + (S N'^2 / 4) sqrt(ln K / K) + S N'.
// Requires T > S K N' and K >= 2 (DomainError otherwise).
double theorem_bound(std::int64_t budget, int num_contexts, int num_workers, int n_prime);

// The single-context case of theorem_bound.
double lemma_bound(std::int64_t budget, int num_workers, int n_prime);

// Empirical regret plus both bounds.
RegretReport regret_report(std::span<const StepLog> logs, std::int64_t budget, int num_contexts,
                           int num_workers, int n_prime);

}  // namespace crowdbandit
