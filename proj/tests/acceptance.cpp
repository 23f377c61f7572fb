// Acceptance checks: one PASS/FAIL line per criterion; exits nonzero if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/bbta.hpp"
#include "crowdbandit/config.hpp"
#include "crowdbandit/core.hpp"
#include "crowdbandit/harness.hpp"
#include "crowdbandit/regret.hpp"
#include "crowdbandit/special_functions.hpp"

namespace cb = crowdbandit;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, double limit_s, const std::function<Verdict()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (secs > limit_s) {
    v.pass = false;
    v.detail += "; over time limit";
  }
  if (!v.pass) ++failures;
  std::printf("%s criterion %d: %s (%s; %.2fs of %.0fs)\n", v.pass ? "PASS" : "FAIL", id,
              name.c_str(), v.detail.c_str(), secs, limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

// ------------------------------------------------------------------ 1

Verdict aggregation_equivalence() {
  const int k = 8;
  const std::vector<double> ones(k, 1.0);
  int cases = 0;
  int mismatches = 0;
  for (int code = 0; code < 6561; ++code, ++cases) {
    std::vector<cb::Label> labels(k);
    int c = code;
    for (int j = 0; j < k; ++j, c /= 3) labels[j] = static_cast<cb::Label>(c % 3 - 1);
    const auto m = cb::majority_vote(labels);
    const auto w = cb::weighted_vote(labels, ones);
    if (m.raw_mean != w.raw_mean || m.estimate != w.estimate || m.confidence != w.confidence)
      ++mismatches;
  }
  return {mismatches == 0 && cases == 6561,
          std::to_string(cases) + " label vectors, " + std::to_string(mismatches) + " mismatches"};
}

// ------------------------------------------------------------------ 2

Verdict estimator_unbiasedness() {
  const int k = 10;
  const int draws = 100000;
  cb::Rng rng(20240601);
  int violations = 0;
  double worst = 0.0;
  for (int pair = 0; pair < 20; ++pair) {
    // Random exponential-weights distribution and random 0/1 losses.
    std::vector<double> losses(k);
    for (double& x : losses) x = 20.0 * cb::uniform01(rng);
    const auto p = cb::worker_distribution(losses, 0.1 + cb::uniform01(rng));
    std::vector<int> l(k);
    for (int& x : l) x = cb::uniform01(rng) < 0.5 ? 1 : 0;
    std::vector<double> sum(k, 0.0);
    for (int n = 0; n < draws; ++n) {
      const int j = cb::sample_index(p, rng);
      // l~_m = l_m / p_m if m was drawn, 0 otherwise.
      sum[j] += l[j] / p[j];
    }
    for (int j = 0; j < k; ++j) {
      const double mean = sum[j] / draws;
      // Standard error from the exact variance l^2 (1 - p) / p of one draw.
      const double se = std::sqrt(l[j] * (1.0 - p[j]) / p[j] / draws);
      const double z = se > 0.0 ? std::abs(mean - l[j]) / se : (mean == l[j] ? 0.0 : INFINITY);
      worst = std::max(worst, z);
      if (z > 4.0) ++violations;
    }
  }
  return {violations == 0, "20 pairs x 10 workers, worst |z| = " + fmt("%.2f", worst)};
}

// ------------------------------------------------------------------ 3

Verdict budget_conservation() {
  cb::Rng rng(3);
  const char* models[] = {"spammer-hammer", "one-coin", "one-coin-malicious", "hammer"};
  int configs = 0;
  int violations = 0;
  int exhausted = 0;
  std::string first_problem;
  for (; configs < 100; ++configs) {
    cb::SyntheticSpec spec;
    spec.num_contexts = 2 + static_cast<int>(cb::uniform_index(rng, 3));
    spec.num_tasks = spec.num_contexts + static_cast<int>(cb::uniform_index(rng, 60));
    spec.num_workers = 3 + static_cast<int>(cb::uniform_index(rng, 10));
    spec.model = models[cb::uniform_index(rng, 4)];
    const std::int64_t nk = static_cast<std::int64_t>(spec.num_tasks) * spec.num_workers;
    const std::int64_t explore = static_cast<std::int64_t>(spec.num_contexts) * spec.num_workers;
    const std::int64_t t = explore + static_cast<std::int64_t>(cb::uniform_index(rng, nk - explore + 1));
    const std::uint64_t seed = rng();

    cb::RunOptions options;
    options.budget = t;
    options.checkpoints = {t / 3, t};
    auto check = [&](const std::string& name, const cb::RunOutcome& out, bool exact) {
      bool ok;
      if (exact)
        ok = out.labels_acquired == t || (out.pool_exhausted && out.labels_acquired < t);
      else
        ok = out.labels_acquired <= t;
      ok = ok && out.snapshots.size() == 2;
      if (out.pool_exhausted) ++exhausted;
      if (!ok) {
        ++violations;
        if (first_problem.empty())
          first_problem = name + " config " + std::to_string(configs) + " acquired " +
                          std::to_string(out.labels_acquired) + " of " + std::to_string(t);
      }
    };
    auto fresh = [&] { return cb::generate_synthetic(spec, seed); };
    {
      auto d = fresh();
      cb::Rng r(seed + 1);
      check("bbta", cb::run_bbta(d.problem, d.oracle, cb::BbtaParams{1}, options, r), true);
    }
    {
      auto d = fresh();
      cb::Rng r(seed + 2);
      check("optkg", cb::run_optkg(d.problem, d.oracle, options, r), true);
    }
    {
      auto d = fresh();
      cb::Rng r(seed + 3);
      check("optkg-multi", cb::run_optkg_multi(d.problem, d.oracle, options, r), true);
    }
    {
      auto d = fresh();
      cb::Rng r(seed + 4);
      check("random", cb::run_random_majority(d.problem, d.oracle, options, r), true);
    }
    {
      auto d = fresh();
      cb::Rng r(seed + 5);
      check("iethresh", cb::run_iethresh(d.problem, d.oracle, cb::IethreshParams{}, options, r),
            false);
    }
    {
      auto d = fresh();
      cb::Rng r(seed + 6);
      check("crowdsense",
            cb::run_crowdsense(d.problem, d.oracle, cb::CrowdsenseParams{}, options, r), false);
    }
  }
  std::string detail = std::to_string(configs) + " configs x 6 strategies, " +
                       std::to_string(violations) + " violations, " + std::to_string(exhausted) +
                       " logged pool exhaustions";
  if (!first_problem.empty()) detail += "; first: " + first_problem;
  return {violations == 0, detail};
}

// ------------------------------------------------------------- 4, 6, 9

cb::ExperimentConfig desk_config(const std::string& model) {
  const std::string text =
      "dataset = synthetic\n"
      "synthetic.n = 300\n"
      "synthetic.k = 30\n"
      "synthetic.s = 3\n"
      "synthetic.model = " + model + "\n"
      "strategies = bbta1:bbta, bbta0:bbta, random, iethresh\n"
      "bbta1.n_prime = 1\n"
      "bbta0.n_prime = 0\n"
      "budget_per_task = 15\n"
      "runs = 30\n"
      "base_seed = 2016\n";
  return cb::ExperimentConfig::from_key_values(cb::KeyValueConfig::parse(text));
}

std::map<std::string, double> final_means(const cb::ExperimentResult& result) {
  std::map<std::string, double> sum;
  std::map<std::string, int> count;
  for (const auto& r : result.records) {
    sum[r.strategy] += r.rows.back().accuracy;
    ++count[r.strategy];
  }
  for (auto& [k, v] : sum) v /= count[k];
  return sum;
}

Verdict regret_bound() {
  const auto config = desk_config("spammer-hammer");
  const auto result = cb::run_experiment(config);
  double total = 0.0;
  int runs = 0;
  for (const auto& r : result.records)
    if (r.strategy == "bbta1") {
      total += r.regret->empirical_regret;
      ++runs;
    }
  const double mean = total / runs;
  const double bound = cb::theorem_bound(4500, 3, 30, 1);
  return {runs == 30 && mean <= bound && 2.0 * mean <= bound,
          "mean regret " + fmt("%.2f", mean) + " over " + std::to_string(runs) +
              " seeds, bound " + fmt("%.2f", bound)};
}

Verdict ordering_claims() {
  bool ok = true;
  std::string detail;
  for (const std::string model : {"spammer-hammer", "one-coin-malicious", "one-coin"}) {
    const auto m = final_means(cb::run_experiment(desk_config(model)));
    const double b1 = m.at("bbta1"), b0 = m.at("bbta0"), rnd = m.at("random"),
                 ie = m.at("iethresh");
    bool pass;
    if (model == "one-coin")
      pass = b1 >= rnd - 0.005;
    else
      pass = b1 >= b0 && b1 >= rnd + 0.01 && b1 >= ie + 0.01;
    ok = ok && pass;
    if (!detail.empty()) detail += "; ";
    detail += model + (pass ? "" : " [violated]") + ": bbta1 " + fmt("%.4f", b1) + ", bbta0 " +
              fmt("%.4f", b0) + ", random " + fmt("%.4f", rnd) + ", iethresh " + fmt("%.4f", ie);
  }
  return {ok, detail};
}

Verdict determinism() {
  bool ok = true;
  std::size_t bytes = 0;
  for (const std::string model : {"spammer-hammer", "one-coin-malicious", "one-coin"}) {
    auto first = desk_config(model);
    first.threads = 1;
    auto second = desk_config(model);
    second.threads = 4;
    const auto a = cb::results_csv(cb::run_experiment(first));
    const auto b = cb::results_csv(cb::run_experiment(second));
    ok = ok && a == b;
    bytes += a.size();
  }
  return {ok, "3 configs run twice (1 and 4 threads), " + std::to_string(bytes) +
                  " CSV bytes compared"};
}

// ------------------------------------------------------------------ 5

Verdict bound_formulas() {
  const double v = cb::theorem_bound(1000, 1, 10, 1);
  cb::Rng rng(5);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = 2 + static_cast<int>(cb::uniform_index(rng, 99));
    const int np = static_cast<int>(cb::uniform_index(rng, 10));
    const std::int64_t t = static_cast<std::int64_t>(k) * np + 1 +
                           static_cast<std::int64_t>(cb::uniform_index(rng, 1000000));
    if (cb::theorem_bound(t, 1, k, np) != cb::lemma_bound(t, k, np)) ++mismatches;
  }
  return {std::abs(v - 303.08) <= 0.01 && mismatches == 0,
          "theorem_bound(1000,1,10,1) = " + fmt("%.4f", v) + ", " + std::to_string(mismatches) +
              "/1000 single-context mismatches"};
}

// ------------------------------------------------------------------ 7

Verdict optkg_consistency() {
  cb::SyntheticSpec spec;
  spec.num_tasks = 300;
  spec.num_workers = 30;
  spec.num_contexts = 3;
  spec.model = "hammer";
  int perfect = 0;
  for (int seed = 0; seed < 30; ++seed) {
    auto d = cb::generate_synthetic(spec, cb::derive_seed(7, "world", seed));
    cb::RunOptions options;
    options.budget = 2 * spec.num_tasks;
    cb::Rng rng(cb::derive_seed(7, "optkg", seed));
    const auto out = cb::run_optkg(d.problem, d.oracle, options, rng);
    if (cb::accuracy(out.estimates, cb::truths_of(d.problem)) == 1.0) ++perfect;
  }

  spec.num_contexts = 1;
  spec.model = "one-coin";
  int identical = 0;
  for (int seed = 0; seed < 30; ++seed) {
    auto a = cb::generate_synthetic(spec, cb::derive_seed(8, "world", seed));
    auto b = cb::generate_synthetic(spec, cb::derive_seed(8, "world", seed));
    cb::RunOptions options;
    options.budget = 15 * spec.num_tasks;
    options.checkpoints = cb::checkpoint_budgets(cb::default_checkpoints(), options.budget);
    cb::Rng ra(seed);
    cb::Rng rb(seed);
    const auto x = cb::run_optkg(a.problem, a.oracle, options, ra);
    const auto y = cb::run_optkg_multi(b.problem, b.oracle, options, rb);
    bool same = x.estimates == y.estimates && x.labels_acquired == y.labels_acquired &&
                a.oracle.realized() == b.oracle.realized() &&
                x.snapshots.size() == y.snapshots.size();
    for (std::size_t c = 0; same && c < x.snapshots.size(); ++c)
      same = x.snapshots[c].estimates == y.snapshots[c].estimates &&
             x.snapshots[c].budget_spent == y.snapshots[c].budget_spent;
    if (same) ++identical;
  }
  return {perfect == 30 && identical == 30,
          "hammers, T=2N: " + std::to_string(perfect) + "/30 seeds at accuracy 1.0; S=1 multi: " +
              std::to_string(identical) + "/30 identical"};
}

// ------------------------------------------------------------------ 8

Verdict special_functions() {
  const double q2 = cb::student_t_quantile(0.025, 2);
  const double q10 = cb::student_t_quantile(0.025, 10);
  cb::Rng rng(8);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = cb::uniform01(rng);
    const double a = 0.05 + 50.0 * cb::uniform01(rng);
    const double b = 0.05 + 50.0 * cb::uniform01(rng);
    worst = std::max(worst, std::abs(cb::reg_incomplete_beta(x, a, b) +
                                     cb::reg_incomplete_beta(1.0 - x, b, a) - 1.0));
  }
  const double tail = cb::beta_tail_at_half(2, 1);
  const bool ok = std::abs(q2 - 4.3027) <= 1e-3 && std::abs(q10 - 2.2281) <= 1e-3 &&
                  worst <= 1e-9 && std::abs(tail - 0.75) <= 1e-10;
  return {ok, "t(0.025,2) = " + fmt("%.6f", q2) + ", t(0.025,10) = " + fmt("%.6f", q10) +
                  ", worst reflection error " + fmt("%.2e", worst) + ", I(2,1) = " +
                  fmt("%.12f", tail)};
}

}  // namespace

int main() {
  report(1, "majority vote equals uniform weighted vote, K=8", 1, aggregation_equivalence);
  report(2, "importance-weighted loss estimates are unbiased", 5, estimator_unbiasedness);
  report(3, "budget conservation", 30, budget_conservation);
  report(4, "mean BBTA regret within the theorem bound", 60, regret_bound);
  report(5, "bound formulas", 1, bound_formulas);
  report(6, "accuracy ordering at N=300, K=30, S=3, T=15N", 300, ordering_claims);
  report(7, "OptKG consistency", 30, optkg_consistency);
  report(8, "special functions", 5, special_functions);
  report(9, "results.csv is reproducible", 300, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
