#include "crowdbandit/regret.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

RegretReport empirical_regret(std::span<const StepLog> logs, int num_contexts) {
  if (num_contexts < 1) throw std::invalid_argument("empirical_regret: need S >= 1");
  std::size_t k = 0;
  for (const StepLog& log : logs) {
    if (log.counterfactual_labels.empty())
      throw std::invalid_argument("step " + std::to_string(log.step) +
                                  " has no counterfactual labels");
    if (k == 0) k = log.counterfactual_labels.size();
    if (log.counterfactual_labels.size() != k)
      throw std::invalid_argument("counterfactual label vectors differ in length");
    if (log.context.value < 0 || log.context.value >= num_contexts)
      throw std::invalid_argument("step context out of range");
  }

  // Per-context loss totals of every fixed worker.
  std::vector<std::vector<double>> fixed(static_cast<std::size_t>(num_contexts),
                                         std::vector<double>(k, 0.0));
  double strategy_loss = 0.0;
  for (const StepLog& log : logs) {
    const Label estimate = log.estimate();
    strategy_loss += log.realized_loss;
    auto& row = fixed[static_cast<std::size_t>(log.context.value)];
    for (std::size_t j = 0; j < k; ++j) row[j] += log.counterfactual_labels[j] != estimate;
  }

  RegretReport report;
  double comparator_loss = 0.0;
  for (const auto& row : fixed) {
    std::size_t best = 0;
    for (std::size_t j = 1; j < row.size(); ++j)
      if (row[j] < row[best]) best = j;
    comparator_loss += row.empty() ? 0.0 : row[best];
    report.per_context_best_worker.push_back(static_cast<int>(best));
  }
  report.empirical_regret = strategy_loss - comparator_loss;
  return report;
}

double theorem_bound(std::int64_t budget, int num_contexts, int num_workers, int n_prime) {
  if (num_workers < 2) throw DomainError("regret bound needs K >= 2");
  if (num_contexts < 1) throw DomainError("regret bound needs S >= 1");
  if (n_prime < 0) throw DomainError("regret bound needs N' >= 0");
  const double s = num_contexts;
  const double k = num_workers;
  const double np = n_prime;
  const double exploration = s * k * np;
  if (!(static_cast<double>(budget) > exploration))
    throw DomainError("regret bound needs T > S K N'");
  const double log_k = std::log(k);
  return 2.0 * std::sqrt((static_cast<double>(budget) - exploration) * s * k * log_k) +
         (s * np * np / 4.0) * std::sqrt(log_k / k) + s * np;
}

double lemma_bound(std::int64_t budget, int num_workers, int n_prime) {
  if (num_workers < 2) throw DomainError("regret bound needs K >= 2");
  if (n_prime < 0) throw DomainError("regret bound needs N' >= 0");
  const double k = num_workers;
  const double np = n_prime;
  const double exploration = k * np;
  if (!(static_cast<double>(budget) > exploration)) throw DomainError("regret bound needs T > K N'");
  const double log_k = std::log(k);
  return 2.0 * std::sqrt((static_cast<double>(budget) - exploration) * k * log_k) +
         (np * np / 4.0) * std::sqrt(log_k / k) + np;
}

RegretReport regret_report(std::span<const StepLog> logs, std::int64_t budget, int num_contexts,
                           int num_workers, int n_prime) {
  RegretReport report = empirical_regret(logs, num_contexts);
  report.theorem_bound = theorem_bound(budget, num_contexts, num_workers, n_prime);
  if (num_contexts == 1) report.lemma_bound = lemma_bound(budget, num_workers, n_prime);
  return report;
}

}  // namespace crowdbandit
