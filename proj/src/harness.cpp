#include "crowdbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "crowdbandit/baselines.hpp"
#include "crowdbandit/bbta.hpp"
#include "crowdbandit/errors.hpp"
#include "crowdbandit/trace.hpp"

namespace crowdbandit {

// ------------------------------------------------------------------ config

std::vector<double> default_checkpoints(int count) {
  std::vector<double> out;
  for (int k = 1; k <= count; ++k) out.push_back(static_cast<double>(k) / count);
  return out;
}

std::vector<std::int64_t> checkpoint_budgets(std::span<const double> fractions,
                                             std::int64_t budget) {
  std::vector<std::int64_t> out;
  out.reserve(fractions.size());
  for (double c : fractions) {
    // The slack keeps e.g. 0.7 * 10 = 7.000000000000001 and 0.29 * 100 =
    // 28.999999999999996 on the right integer.
    const auto b = static_cast<std::int64_t>(std::floor(c * static_cast<double>(budget) + 1e-9));
    out.push_back(std::clamp<std::int64_t>(b, 0, budget));
  }
  return out;
}

namespace {

const std::set<std::string> kReservedNamespaces = {"synthetic", "replay", "trace"};
const std::set<std::string> kGlobalKeys = {
    "dataset", "strategies", "budget", "budget_per_task", "n_prime", "checkpoints",
    "runs",    "base_seed",  "timing", "trace",           "threads"};

std::vector<double> parse_checkpoints(const std::string& value) {
  const auto items = split_list(value);
  if (items.size() == 1 && items[0].find_first_of(".eE") == std::string::npos) {
    const auto count = parse_integer(items[0], "checkpoints");
    if (count < 1) throw ConfigError("checkpoints: count must be >= 1");
    return default_checkpoints(static_cast<int>(count));
  }
  std::vector<double> out;
  for (const auto& item : items) out.push_back(parse_real(item, "checkpoints"));
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_key_values(const KeyValueConfig& kv,
                                                   const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  const std::string dataset = kv.get_string("dataset", "synthetic");
  if (dataset == "synthetic") {
    SyntheticSpec spec;
    spec.num_tasks = static_cast<int>(kv.get_int("synthetic.n", spec.num_tasks));
    spec.num_workers = static_cast<int>(kv.get_int("synthetic.k", spec.num_workers));
    spec.num_contexts = static_cast<int>(kv.get_int("synthetic.s", spec.num_contexts));
    spec.model = kv.get_string("synthetic.model", spec.model);
    if (auto p = kv.get("synthetic.proportions"))
      for (const auto& item : split_list(*p))
        spec.proportions.push_back(parse_real(item, "synthetic.proportions"));
    cfg.synthetic = spec;
  } else if (dataset == "replay") {
    const auto tasks = kv.get("replay.tasks");
    const auto matrix = kv.get("replay.matrix");
    if (!tasks || !matrix) throw ConfigError("replay dataset needs replay.tasks and replay.matrix");
    cfg.tasks_path = base_dir / *tasks;
    cfg.matrix_path = base_dir / *matrix;
  } else {
    throw ConfigError("dataset must be 'synthetic' or 'replay', got '" + dataset + "'");
  }

  const std::string strategies = kv.get_string("strategies", "bbta");
  for (const auto& item : split_list(strategies)) {
    StrategySpec s;
    const auto colon = item.find(':');
    s.label = item.substr(0, colon);
    s.key = colon == std::string::npos ? item : item.substr(colon + 1);
    cfg.strategies.push_back(std::move(s));
  }

  cfg.budget = kv.get_int("budget", 0);
  cfg.budget_per_task = kv.get_double("budget_per_task", cfg.budget_per_task);
  cfg.n_prime = static_cast<int>(kv.get_int("n_prime", cfg.n_prime));
  cfg.checkpoints = kv.has("checkpoints") ? parse_checkpoints(*kv.get("checkpoints"))
                                          : default_checkpoints();
  cfg.runs = static_cast<int>(kv.get_int("runs", cfg.runs));
  cfg.base_seed = static_cast<std::uint64_t>(kv.get_int("base_seed", 0));
  cfg.timing = kv.get_bool("timing", false);
  cfg.trace = kv.get_bool("trace", false);
  cfg.trace_strategy = kv.get_string("trace.strategy", "");
  cfg.trace_run = static_cast<int>(kv.get_int("trace.run", 0));
  cfg.threads = static_cast<int>(kv.get_int("threads", 0));

  std::set<std::string> labels;
  for (const auto& s : cfg.strategies) labels.insert(s.label);
  for (const auto& [key, value] : kv.entries()) {
    const auto dot = key.find('.');
    if (dot == std::string::npos) {
      if (!kGlobalKeys.count(key)) throw ConfigError("unknown config key '" + key + "'");
      continue;
    }
    const std::string ns = key.substr(0, dot);
    if (kReservedNamespaces.count(ns)) continue;
    if (!labels.count(ns))
      throw ConfigError("config key '" + key + "' names no configured strategy");
  }
  for (auto& s : cfg.strategies) s.params = kv.section(s.label);
  for (const auto& ns : {"synthetic", "replay", "trace"}) {
    for (const auto& [sub, value] : kv.section(ns)) {
      static const std::map<std::string, std::set<std::string>> allowed = {
          {"synthetic", {"n", "k", "s", "model", "proportions"}},
          {"replay", {"tasks", "matrix"}},
          {"trace", {"strategy", "run"}}};
      if (!allowed.at(ns).count(sub))
        throw ConfigError("unknown config key '" + std::string(ns) + "." + sub + "'");
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_key_values(KeyValueConfig::load(path), path.parent_path());
}

void ExperimentConfig::validate() const {
  if (strategies.empty()) throw ConfigError("no strategies configured");
  std::set<std::string> seen;
  for (const auto& s : strategies) {
    if (s.label.empty() || s.key.empty()) throw ConfigError("empty strategy label or key");
    if (kReservedNamespaces.count(s.label))
      throw ConfigError("strategy label '" + s.label + "' is reserved");
    if (!seen.insert(s.label).second)
      throw ConfigError("duplicate strategy label '" + s.label + "'");
    find_strategy(s.key);
    check_strategy_params(s.key, s.params);
  }
  if (budget < 0) throw BudgetError("budget must be non-negative");
  if (budget == 0 && !(budget_per_task > 0.0))
    throw BudgetError("budget_per_task must be positive");
  if (n_prime < 0) throw ConfigError("n_prime must be non-negative");
  if (runs < 1) throw ConfigError("runs must be >= 1");
  if (checkpoints.empty()) throw ConfigError("at least one checkpoint required");
  for (std::size_t i = 0; i < checkpoints.size(); ++i) {
    if (!(checkpoints[i] > 0.0 && checkpoints[i] <= 1.0))
      throw ConfigError("checkpoints must lie in (0, 1]");
    if (i > 0 && checkpoints[i] < checkpoints[i - 1])
      throw ConfigError("checkpoints must be sorted");
  }
  if (synthetic) {
    if (synthetic->num_tasks < 1 || synthetic->num_workers < 1 || synthetic->num_contexts < 1)
      throw ConfigError("synthetic n, k and s must be >= 1");
    if (!synthetic->proportions.empty() &&
        static_cast<int>(synthetic->proportions.size()) != synthetic->num_contexts)
      throw ConfigError("synthetic.proportions needs one entry per context");
  }
  if (threads < 0) throw ConfigError("threads must be >= 0");
}

// ----------------------------------------------------------------- datasets

Dataset generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
  if (spec.num_tasks < 1 || spec.num_workers < 1 || spec.num_contexts < 1)
    throw ConfigError("synthetic spec needs N, K, S >= 1");
  Problem problem;
  problem.num_contexts = spec.num_contexts;
  problem.num_workers = spec.num_workers;
  problem.tasks.resize(static_cast<std::size_t>(spec.num_tasks));

  std::vector<int> contexts(static_cast<std::size_t>(spec.num_tasks));
  if (spec.proportions.empty()) {
    for (int i = 0; i < spec.num_tasks; ++i) contexts[i] = i % spec.num_contexts;
  } else {
    if (static_cast<int>(spec.proportions.size()) != spec.num_contexts)
      throw ConfigError("one proportion per context required");
    double total = 0.0;
    for (double p : spec.proportions) {
      if (!(p >= 0.0)) throw ConfigError("context proportions must be non-negative");
      total += p;
    }
    if (!(total > 0.0)) throw ConfigError("context proportions sum to zero");
    // Largest-remainder rounding of N * p_s / sum(p).
    std::vector<int> counts(spec.proportions.size());
    std::vector<std::pair<double, int>> remainders;
    int assigned = 0;
    for (std::size_t s = 0; s < counts.size(); ++s) {
      const double exact = spec.num_tasks * spec.proportions[s] / total;
      counts[s] = static_cast<int>(std::floor(exact));
      assigned += counts[s];
      remainders.emplace_back(exact - counts[s], static_cast<int>(s));
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    for (std::size_t r = 0; assigned < spec.num_tasks; ++r, ++assigned)
      ++counts[static_cast<std::size_t>(remainders[r].second)];
    std::size_t i = 0;
    for (std::size_t s = 0; s < counts.size(); ++s)
      for (int c = 0; c < counts[s]; ++c) contexts[i++] = static_cast<int>(s);
  }

  Rng rng(hash_combine(seed, 0x7275746873ULL));
  for (int i = 0; i < spec.num_tasks; ++i) {
    Task& t = problem.tasks[static_cast<std::size_t>(i)];
    t.id = i;
    t.context.value = contexts[static_cast<std::size_t>(i)];
    t.true_label = (rng() >> 63) ? Label{1} : Label{-1};
  }
  WorkerOracle oracle = make_worker_model(spec.model, problem, hash_combine(seed, 0x776F726BULL));
  return {std::move(problem), std::move(oracle)};
}

Dataset load_replay(const std::filesystem::path& tasks_path,
                    const std::filesystem::path& matrix_path) {
  Problem problem;
  problem.tasks = read_tasks(tasks_path);
  LabelMatrix matrix = read_label_matrix(matrix_path);
  if (matrix.rows() != problem.num_tasks())
    throw FormatError("label matrix has " + std::to_string(matrix.rows()) + " rows but " +
                      std::to_string(problem.num_tasks()) + " tasks are listed");
  int max_context = 0;
  for (const Task& t : problem.tasks) {
    if (t.context.value < 0) throw FormatError("negative context in " + tasks_path.string());
    max_context = std::max(max_context, t.context.value);
  }
  problem.num_contexts = max_context + 1;
  problem.num_workers = matrix.cols();
  problem.validate();
  WorkerOracle oracle = make_replay(std::move(matrix));
  return {std::move(problem), std::move(oracle)};
}

// ----------------------------------------------------------------- registry

namespace {

double param_real(const StrategyParams& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : parse_real(it->second, key);
}

std::int64_t param_int(const StrategyParams& p, const std::string& key, std::int64_t fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : parse_integer(it->second, key);
}

struct Registered {
  StrategyRunner run;
  std::set<std::string> params;
};

const std::map<std::string, Registered>& registry() {
  static const std::map<std::string, Registered> r = {
      {"bbta",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams& p, const RunOptions& opt,
           Rng& rng) {
          BbtaParams params;
          params.n_prime = static_cast<int>(param_int(p, "n_prime", params.n_prime));
          return run_bbta(pr, o, params, opt, rng);
        },
        {"n_prime"}}},
      {"iethresh",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams& p, const RunOptions& opt,
           Rng& rng) {
          IethreshParams params;
          params.alpha = param_real(p, "alpha", params.alpha);
          params.epsilon = param_real(p, "epsilon", params.epsilon);
          return run_iethresh(pr, o, params, opt, rng);
        },
        {"alpha", "epsilon"}}},
      {"crowdsense",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams& p, const RunOptions& opt,
           Rng& rng) {
          CrowdsenseParams params;
          params.smoothing = param_real(p, "smoothing", params.smoothing);
          params.epsilon = param_real(p, "epsilon", params.epsilon);
          return run_crowdsense(pr, o, params, opt, rng);
        },
        {"smoothing", "epsilon"}}},
      {"optkg",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams&, const RunOptions& opt,
           Rng& rng) { return run_optkg(pr, o, opt, rng); },
        {}}},
      {"optkg-multi",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams&, const RunOptions& opt,
           Rng& rng) { return run_optkg_multi(pr, o, opt, rng); },
        {}}},
      {"random",
       {[](const Problem& pr, WorkerOracle& o, const StrategyParams&, const RunOptions& opt,
           Rng& rng) { return run_random_majority(pr, o, opt, rng); },
        {}}},
  };
  return r;
}

}  // namespace

const StrategyRunner& find_strategy(const std::string& key) {
  const auto it = registry().find(key);
  if (it == registry().end()) throw UnknownStrategy("unknown strategy '" + key + "'");
  return it->second.run;
}

std::vector<std::string> strategy_keys() {
  std::vector<std::string> out;
  for (const auto& [key, value] : registry()) out.push_back(key);
  return out;
}

void check_strategy_params(const std::string& key, const StrategyParams& params) {
  const auto it = registry().find(key);
  if (it == registry().end()) throw UnknownStrategy("unknown strategy '" + key + "'");
  for (const auto& [name, value] : params)
    if (!it->second.params.count(name))
      throw ConfigError("strategy '" + key + "' has no parameter '" + name + "'");
}

// ------------------------------------------------------------------ running

std::vector<ResultRow> ExperimentResult::rows() const {
  std::vector<ResultRow> out;
  for (const auto& r : records) out.insert(out.end(), r.rows.begin(), r.rows.end());
  return out;
}

std::uint64_t derive_seed(std::uint64_t base_seed, const std::string& stream, int run) {
  return hash_combine(hash_combine(base_seed, hash_string(stream)),
                      static_cast<std::uint64_t>(run));
}

namespace {

int thread_count(const ExperimentConfig& config, std::size_t jobs) {
  int n = config.threads;
  if (n == 0) {
    if (const char* env = std::getenv("CROWDBANDIT_THREADS")) {
      n = static_cast<int>(parse_integer(env, "CROWDBANDIT_THREADS"));
      if (n < 1) throw ConfigError("CROWDBANDIT_THREADS must be >= 1");
    } else {
      n = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    }
  }
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), jobs));
}

int strategy_n_prime(const StrategySpec& s, int fallback) {
  return static_cast<int>(param_int(s.params, "n_prime", fallback));
}

// Feasibility checks that would otherwise fail inside every run.
void check_feasible(const ExperimentConfig& config, const Problem& problem, std::int64_t budget) {
  const std::int64_t n = problem.num_tasks();
  const std::int64_t k = problem.num_workers;
  for (const auto& s : config.strategies) {
    if (s.key == "bbta") {
      const int np = strategy_n_prime(s, config.n_prime);
      if (budget < problem.num_contexts * k * np)
        throw BudgetError(s.label + ": budget " + std::to_string(budget) +
                          " is below the exploration cost S*K*N' = " +
                          std::to_string(problem.num_contexts * k * np));
      if (k < 2) throw ConfigError(s.label + ": BBTA needs K >= 2");
    } else if (s.key == "random" && budget > n * k) {
      throw BudgetError(s.label + ": budget " + std::to_string(budget) + " exceeds N*K = " +
                        std::to_string(n * k));
    } else if ((s.key == "optkg" || s.key == "optkg-multi") && budget < 1) {
      throw BudgetError(s.label + ": OptKG needs a budget of at least 1");
    } else if (s.key == "crowdsense" && k < 3) {
      throw ConfigError(s.label + ": CrowdSense needs K >= 3");
    }
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();

  // Loaded once for shapes and feasibility; every job rebuilds its own copy
  // so oracles (which cache labels) are never shared between threads.
  auto make_dataset = [&config](int run) {
    if (config.synthetic) return generate_synthetic(*config.synthetic, derive_seed(config.base_seed, "world", run));
    return load_replay(config.tasks_path, config.matrix_path);
  };
  const Dataset probe = make_dataset(0);
  const Problem& shape = probe.problem;

  ExperimentResult result;
  result.num_tasks = shape.num_tasks();
  result.num_contexts = shape.num_contexts;
  result.num_workers = shape.num_workers;
  result.budget = config.budget > 0
                      ? config.budget
                      : static_cast<std::int64_t>(std::llround(config.budget_per_task *
                                                               shape.num_tasks()));
  if (result.budget < 1) throw BudgetError("total budget must be >= 1");
  result.checkpoint_budgets = checkpoint_budgets(config.checkpoints, result.budget);
  check_feasible(config, shape, result.budget);
  if (!config.synthetic) truths_of(shape);

  std::string traced;
  if (config.trace) {
    traced = config.trace_strategy;
    if (traced.empty()) {
      for (const auto& s : config.strategies)
        if (s.key == "bbta") {
          traced = s.label;
          break;
        }
    }
    const auto it = std::find_if(config.strategies.begin(), config.strategies.end(),
                                 [&](const StrategySpec& s) { return s.label == traced; });
    if (it == config.strategies.end() || it->key != "bbta")
      throw ConfigError("trace needs a bbta strategy (trace.strategy)");
    if (config.trace_run < 0 || config.trace_run >= config.runs)
      throw ConfigError("trace.run outside [0, runs)");
  }

  const std::size_t jobs = config.strategies.size() * static_cast<std::size_t>(config.runs);
  result.records.resize(jobs);
  RunOptions options;
  options.budget = result.budget;
  options.checkpoints = result.checkpoint_budgets;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t job = next.fetch_add(1);
      if (job >= jobs) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        const StrategySpec& spec = config.strategies[job / static_cast<std::size_t>(config.runs)];
        const int run = static_cast<int>(job % static_cast<std::size_t>(config.runs));
        Dataset data = make_dataset(run);
        const auto truths = truths_of(data.problem);
        StrategyParams params = spec.params;
        if (spec.key == "bbta" && !params.count("n_prime"))
          params["n_prime"] = std::to_string(config.n_prime);
        Rng rng(derive_seed(config.base_seed, spec.label, run));
        RunOutcome outcome =
            find_strategy(spec.key)(data.problem, data.oracle, params, options, rng);

        RunRecord& rec = result.records[job];
        rec.strategy = spec.label;
        rec.run = run;
        rec.labels_acquired = outcome.labels_acquired;
        rec.pool_exhausted = outcome.pool_exhausted;
        rec.truncated = outcome.truncated;
        for (const Snapshot& snap : outcome.snapshots)
          rec.rows.push_back({spec.label, run, snap.budget_spent,
                              accuracy(snap.estimates, truths),
                              config.timing ? snap.elapsed_ms : 0.0});
        if (spec.key == "bbta") {
          const int np = strategy_n_prime(spec, config.n_prime);
          RegretReport report = empirical_regret(outcome.logs, data.problem.num_contexts);
          const std::int64_t explore =
              static_cast<std::int64_t>(data.problem.num_contexts) * data.problem.num_workers * np;
          if (result.budget > explore) {
            report.theorem_bound = theorem_bound(result.budget, data.problem.num_contexts,
                                                 data.problem.num_workers, np);
            if (data.problem.num_contexts == 1)
              report.lemma_bound = lemma_bound(result.budget, data.problem.num_workers, np);
          } else {
            report.theorem_bound = std::numeric_limits<double>::quiet_NaN();
          }
          rec.regret = report;
          if (spec.label == traced && run == config.trace_run) {
            rec.traced = true;
            rec.logs = std::move(outcome.logs);
          }
        }
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const int n_threads = thread_count(config, jobs);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return result;
}

// ------------------------------------------------------------------ output

namespace {

std::string format_real(double x, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

struct MeanStderr {
  double mean = 0.0;
  double stderr_ = 0.0;
};

MeanStderr mean_stderr(const std::vector<double>& xs) {
  MeanStderr out;
  if (xs.empty()) return out;
  double sum = 0.0;
  for (double x : xs) sum += x;
  out.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.stderr_ = std::sqrt(ss / static_cast<double>(xs.size() - 1)) /
                  std::sqrt(static_cast<double>(xs.size()));
  }
  return out;
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace

std::string results_csv(const ExperimentResult& result) {
  std::ostringstream out;
  out << "strategy,run,budget_spent,accuracy,elapsed_ms\n";
  for (const ResultRow& row : result.rows())
    out << row.strategy << ',' << row.run << ',' << row.budget_spent << ','
        << format_real(row.accuracy, "%.6f") << ',' << format_real(row.elapsed_ms, "%.3f")
        << '\n';
  return out.str();
}

std::string summary_json(const ExperimentConfig& config, const ExperimentResult& result) {
  using nlohmann::json;
  json summary;
  summary["budget"] = result.budget;
  summary["runs"] = config.runs;
  summary["base_seed"] = config.base_seed;
  summary["num_tasks"] = result.num_tasks;
  summary["num_workers"] = result.num_workers;
  summary["num_contexts"] = result.num_contexts;
  summary["checkpoints"] = config.checkpoints;
  summary["checkpoint_budgets"] = result.checkpoint_budgets;
  json strategies = json::array();
  for (const auto& spec : config.strategies) {
    json entry;
    entry["label"] = spec.label;
    entry["key"] = spec.key;
    entry["params"] = spec.params;
    std::vector<const RunRecord*> recs;
    for (const auto& r : result.records)
      if (r.strategy == spec.label) recs.push_back(&r);
    json points = json::array();
    for (std::size_t c = 0; c < result.checkpoint_budgets.size(); ++c) {
      std::vector<double> acc;
      std::vector<double> spent;
      for (const RunRecord* r : recs) {
        acc.push_back(r->rows[c].accuracy);
        spent.push_back(static_cast<double>(r->rows[c].budget_spent));
      }
      const auto a = mean_stderr(acc);
      points.push_back({{"fraction", config.checkpoints[c]},
                        {"budget", result.checkpoint_budgets[c]},
                        {"mean_budget_spent", mean_stderr(spent).mean},
                        {"mean_accuracy", a.mean},
                        {"stderr_accuracy", a.stderr_}});
    }
    entry["checkpoints"] = points;
    int exhausted = 0;
    int truncated = 0;
    for (const RunRecord* r : recs) {
      exhausted += r->pool_exhausted;
      truncated += r->truncated;
    }
    entry["pool_exhausted_runs"] = exhausted;
    entry["truncated_runs"] = truncated;
    if (spec.key == "bbta") {
      std::vector<double> regrets;
      json per_run = json::array();
      double bound = std::numeric_limits<double>::quiet_NaN();
      std::optional<double> lemma;
      for (const RunRecord* r : recs) {
        regrets.push_back(r->regret->empirical_regret);
        bound = r->regret->theorem_bound;
        lemma = r->regret->lemma_bound;
        per_run.push_back({{"run", r->run},
                           {"empirical_regret", r->regret->empirical_regret},
                           {"per_context_best_worker", r->regret->per_context_best_worker}});
      }
      const auto m = mean_stderr(regrets);
      entry["regret"] = {{"mean_empirical_regret", m.mean},
                         {"stderr_empirical_regret", m.stderr_},
                         {"theorem_bound", finite_or_null(bound)},
                         {"lemma_bound", lemma ? json(*lemma) : json(nullptr)},
                         {"runs", per_run}};
    }
    strategies.push_back(entry);
  }
  summary["strategies"] = strategies;
  return summary.dump(2) + "\n";
}

void write_outputs(const ExperimentConfig& config, const ExperimentResult& result,
                   const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  auto write = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot write " + path.string());
    out << text;
  };
  write(out_dir / "results.csv", results_csv(result));
  write(out_dir / "summary.json", summary_json(config, result));
  if (config.trace)
    for (const auto& r : result.records)
      if (r.traced) write_trace(out_dir / "trace.jsonl", r.logs);
}

}  // namespace crowdbandit
