// crowdbandit: command-line front end for the experiment harness.
//
//   crowdbandit run <config> [--out DIR] [--trace] [--timing] [--threads N]
//   crowdbandit gen-matrix <spec> --matrix m.csv --tasks t.csv [--run R]
//   crowdbandit regret <trace.jsonl> [--nprime N] [--T T] [--S S]
//   crowdbandit bounds --T T --S S --K K --nprime N
//
// Exit codes: 1 usage, 2 configuration, 3 unknown strategy, 4 malformed
// input file, 5 infeasible budget, 6 argument outside a formula's domain.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "crowdbandit/config.hpp"
#include "crowdbandit/errors.hpp"
#include "crowdbandit/harness.hpp"
#include "crowdbandit/regret.hpp"
#include "crowdbandit/trace.hpp"

namespace cb = crowdbandit;

namespace {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kConfig = 2,
  kUnknownStrategy = 3,
  kMalformedInput = 4,
  kBudget = 5,
  kDomain = 6,
};

nlohmann::json report_json(const cb::RegretReport& r) {
  nlohmann::json j;
  j["empirical_regret"] = r.empirical_regret;
  j["theorem_bound"] = r.theorem_bound;
  j["lemma_bound"] = r.lemma_bound ? nlohmann::json(*r.lemma_bound) : nlohmann::json(nullptr);
  j["per_context_best_worker"] = r.per_context_best_worker;
  return j;
}

int cmd_run(const std::string& config_path, const std::string& out_dir, bool trace, bool timing,
            int threads) {
  cb::ExperimentConfig config = cb::ExperimentConfig::load(config_path);
  if (trace) config.trace = true;
  if (timing) config.timing = true;
  if (threads > 0) config.threads = threads;
  config.validate();
  const auto result = cb::run_experiment(config);
  cb::write_outputs(config, result, out_dir);
  std::cerr << "wrote " << result.rows().size() << " rows to "
            << (std::filesystem::path(out_dir) / "results.csv").string() << '\n';
  return kOk;
}

int cmd_gen_matrix(const std::string& spec_path, const std::string& matrix_out,
                   const std::string& tasks_out, int run) {
  auto kv = cb::KeyValueConfig::load(spec_path);
  kv.set("dataset", "synthetic");
  if (!kv.has("strategies")) kv.set("strategies", "random");
  const auto config = cb::ExperimentConfig::from_key_values(kv, {});
  auto data = cb::generate_synthetic(*config.synthetic,
                                     cb::derive_seed(config.base_seed, "world", run));
  for (int i = 0; i < data.problem.num_tasks(); ++i) data.oracle.query_all(i);
  cb::write_label_matrix(matrix_out, data.oracle.realized());
  cb::write_tasks(tasks_out, data.problem.tasks);
  return kOk;
}

int cmd_regret(const std::string& trace_path, int n_prime, std::int64_t budget, int contexts) {
  const auto logs = cb::read_trace(trace_path);
  if (logs.empty()) throw cb::FormatError(trace_path + ": empty trace");
  const int k = static_cast<int>(logs.front().counterfactual_labels.size());
  int s = contexts;
  if (s <= 0) {
    s = 0;
    for (const auto& log : logs) s = std::max(s, log.context.value + 1);
  }
  const std::int64_t t =
      budget > 0 ? budget
                 : static_cast<std::int64_t>(logs.size()) + static_cast<std::int64_t>(s) * k * n_prime;
  const auto report = cb::regret_report(logs, t, s, k, n_prime);
  auto j = report_json(report);
  j["steps"] = logs.size();
  j["budget"] = t;
  std::cout << j.dump(2) << '\n';
  return kOk;
}

int cmd_bounds(std::int64_t budget, int contexts, int workers, int n_prime) {
  nlohmann::json j;
  j["theorem_bound"] = cb::theorem_bound(budget, contexts, workers, n_prime);
  j["lemma_bound"] = contexts == 1 ? nlohmann::json(cb::lemma_bound(budget, workers, n_prime))
                                   : nlohmann::json(nullptr);
  std::cout << j.dump(2) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Budgeted task assignment for heterogeneous crowdsourcing"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = ".";
  bool trace = false;
  bool timing = false;
  int threads = 0;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_flag("--trace", trace, "Write trace.jsonl for one BBTA run");
  run->add_flag("--timing", timing, "Record wall-clock elapsed_ms");
  run->add_option("--threads", threads, "Worker threads (overrides CROWDBANDIT_THREADS)");

  std::string spec_path;
  std::string matrix_out;
  std::string tasks_out;
  int gen_run = 0;
  auto* gen = app.add_subcommand("gen-matrix", "Emit a complete synthetic label matrix");
  gen->add_option("spec", spec_path, "Generator spec (synthetic.* keys, base_seed)")->required();
  gen->add_option("--matrix", matrix_out, "Label matrix CSV")->required();
  gen->add_option("--tasks", tasks_out, "Task CSV")->required();
  gen->add_option("--run", gen_run, "Run index whose world to generate");

  std::string trace_path;
  int regret_nprime = 0;
  std::int64_t regret_budget = 0;
  int regret_contexts = 0;
  auto* regret = app.add_subcommand("regret", "Empirical regret of a BBTA trace");
  regret->add_option("trace", trace_path, "trace.jsonl")->required();
  regret->add_option("--nprime", regret_nprime, "Exploration tasks per context");
  regret->add_option("--T", regret_budget, "Total budget (default: steps + S*K*N')");
  regret->add_option("--S", regret_contexts, "Number of contexts (default: from trace)");

  std::int64_t bound_budget = 0;
  int bound_contexts = 1;
  int bound_workers = 2;
  int bound_nprime = 0;
  auto* bounds = app.add_subcommand("bounds", "Closed-form regret bounds");
  bounds->add_option("--T", bound_budget, "Total budget")->required();
  bounds->add_option("--S", bound_contexts, "Number of contexts")->required();
  bounds->add_option("--K", bound_workers, "Number of workers")->required();
  bounds->add_option("--nprime", bound_nprime, "Exploration tasks per context")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, out_dir, trace, timing, threads);
    if (*gen) return cmd_gen_matrix(spec_path, matrix_out, tasks_out, gen_run);
    if (*regret) return cmd_regret(trace_path, regret_nprime, regret_budget, regret_contexts);
    if (*bounds) return cmd_bounds(bound_budget, bound_contexts, bound_workers, bound_nprime);
  } catch (const cb::UnknownStrategy& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUnknownStrategy;
  } catch (const cb::BudgetError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const cb::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const cb::FormatError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const cb::IncompleteMatrix& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const cb::DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
