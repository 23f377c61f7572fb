#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "crowdbandit/errors.hpp"
#include "crowdbandit/rng.hpp"
#include "crowdbandit/workers.hpp"

using namespace crowdbandit;

namespace {

Problem make_problem(int n, int k, int s, std::uint64_t seed) {
  Problem p;
  p.num_workers = k;
  p.num_contexts = s;
  Rng rng(seed);
  for (int i = 0; i < n; ++i)
    p.tasks.push_back({i, {i % s}, uniform01(rng) < 0.5 ? Label{1} : Label{-1}});
  return p;
}

double empirical_accuracy(WorkerOracle& oracle, const Problem& p, int worker, int context) {
  int correct = 0;
  int total = 0;
  for (const Task& t : p.tasks) {
    if (t.context.value != context) continue;
    ++total;
    correct += oracle.query(t.id, worker) == *t.true_label ? 1 : 0;
  }
  return static_cast<double>(correct) / total;
}

}  // namespace

TEST_CASE("round_robin_assignment") {
  CHECK(round_robin_assignment(5, 3) == std::vector<int>{0, 1, 2, 0, 1});
  CHECK(round_robin_assignment(4, 3, 1) == std::vector<int>{1, 2, 0, 1});
}

TEST_CASE("empirical accuracy of simulated workers lies within 4 sigma of the profile") {
  const int n = 30000;
  const Problem p = make_problem(n, 6, 3, 17);
  const auto experts = round_robin_assignment(6, 3);
  const int per_context = n / 3;

  auto band = [&](double acc) { return 4.0 * std::sqrt(acc * (1 - acc) / per_context) + 1e-12; };

  SUBCASE("spammer-hammer") {
    auto oracle = make_spammer_hammer(p, experts, 99);
    for (int j = 0; j < 6; ++j)
      for (int s = 0; s < 3; ++s) {
        const double want = experts[j] == s ? 1.0 : 0.5;
        CHECK(std::abs(empirical_accuracy(oracle, p, j, s) - want) <= band(want));
      }
  }
  SUBCASE("one-coin") {
    auto oracle = make_one_coin(p, experts, 99);
    for (int j = 0; j < 6; ++j)
      for (int s = 0; s < 3; ++s) {
        const double want = experts[j] == s ? 0.9 : 0.6;
        CHECK(std::abs(empirical_accuracy(oracle, p, j, s) - want) <= band(want));
      }
  }
  SUBCASE("one-coin-malicious") {
    const auto bad = round_robin_assignment(6, 3, 1);
    auto oracle = make_one_coin_malicious(p, experts, bad, 99);
    for (int j = 0; j < 6; ++j)
      for (int s = 0; s < 3; ++s) {
        const double want = experts[j] == s ? 0.9 : (bad[j] == s ? 0.3 : 0.6);
        CHECK(std::abs(empirical_accuracy(oracle, p, j, s) - want) <= band(want));
      }
  }
}

TEST_CASE("labels are cached and independent of query order") {
  const Problem p = make_problem(200, 5, 2, 3);
  const auto experts = round_robin_assignment(5, 2);
  auto a = make_one_coin(p, experts, 1234);
  auto b = make_one_coin(p, experts, 1234);

  std::vector<Label> forward;
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 5; ++j) forward.push_back(a.query(i, j));
  // Reverse order on the second oracle, and repeat each query.
  for (int i = 199; i >= 0; --i)
    for (int j = 4; j >= 0; --j) {
      const Label first = b.query(i, j);
      CHECK(b.query(i, j) == first);
    }
  for (int i = 0; i < 200; ++i)
    for (int j = 0; j < 5; ++j) CHECK(b.query(i, j) == forward[static_cast<std::size_t>(i * 5 + j)]);
  CHECK(a.realized() == b.realized());
  CHECK(a.query_all(7) == std::vector<Label>(b.realized().row(7).begin(), b.realized().row(7).end()));

  auto c = make_one_coin(p, experts, 1235);
  for (int i = 0; i < 200; ++i) c.query_all(i);
  CHECK_FALSE(c.realized() == a.realized());
}

TEST_CASE("query arguments are range checked") {
  const Problem p = make_problem(4, 2, 1, 1);
  auto oracle = make_hammers(p, 1);
  CHECK_THROWS(oracle.query(4, 0));
  CHECK_THROWS(oracle.query(0, 2));
  CHECK_THROWS(oracle.query(-1, 0));
}

TEST_CASE("hammers are always right") {
  const Problem p = make_problem(50, 3, 2, 8);
  auto oracle = make_hammers(p, 5);
  for (const Task& t : p.tasks)
    for (int j = 0; j < 3; ++j) CHECK(oracle.query(t.id, j) == *t.true_label);
}

TEST_CASE("one-coin-malicious needs two contexts") {
  const Problem p = make_problem(10, 2, 1, 1);
  const std::vector<int> good{0, 0};
  const std::vector<int> bad{0, 0};
  CHECK_THROWS_AS(make_one_coin_malicious(p, good, bad, 1), ConfigError);
}

TEST_CASE("true_accuracy") {
  SUBCASE("profiles give the analytic expectation") {
    // Contexts 0,0,1,1,1 over 5 tasks; worker 0 hammer on context 0.
    Problem p;
    p.num_workers = 2;
    p.num_contexts = 2;
    for (int i = 0; i < 5; ++i) p.tasks.push_back({i, {i < 2 ? 0 : 1}, Label{1}});
    auto oracle = make_spammer_hammer(p, std::vector<int>{0, 1}, 1);
    const auto acc = true_accuracy(oracle, p.tasks);
    CHECK(acc[0] == doctest::Approx((2 * 1.0 + 3 * 0.5) / 5));  // 0.7
    CHECK(acc[1] == doctest::Approx((2 * 0.5 + 3 * 1.0) / 5));  // 0.8
  }
  SUBCASE("replay counts agreement with the truth") {
    LabelMatrix m(3, 2);
    m.set(0, 0, 1);
    m.set(1, 0, -1);
    m.set(2, 0, -1);
    m.set(0, 1, 1);
    m.set(1, 1, 1);
    m.set(2, 1, 1);
    std::vector<Task> tasks = {{0, {0}, Label{1}}, {1, {0}, Label{1}}, {2, {0}, Label{-1}}};
    auto oracle = make_replay(m);
    const auto acc = true_accuracy(oracle, tasks);
    CHECK(acc[0] == doctest::Approx(2.0 / 3.0));
    CHECK(acc[1] == doctest::Approx(2.0 / 3.0));
  }
}

TEST_CASE("accuracy_histogram uses right-closed bins") {
  const std::vector<double> acc{0.62, 0.90, 0.0, 1.0, 0.65, 0.651};
  const auto h = accuracy_histogram(acc);
  REQUIRE(h.size() == 20);
  CHECK(h[0] == 1);   // 0.0
  CHECK(h[12] == 2);  // (0.60, 0.65]: 0.62 and 0.65
  CHECK(h[13] == 1);  // 0.651
  CHECK(h[17] == 1);  // (0.85, 0.90]
  CHECK(h[19] == 1);  // 1.0
  int total = 0;
  for (int c : h) total += c;
  CHECK(total == 6);
}

TEST_CASE("replay requires a complete matrix") {
  LabelMatrix m(2, 2);
  m.set(0, 0, 1);
  m.set(0, 1, 1);
  m.set(1, 0, -1);
  CHECK_THROWS_AS(make_replay(m), IncompleteMatrix);
  m.set(1, 1, 1);
  auto oracle = make_replay(m);
  CHECK(oracle.is_replay());
  CHECK(oracle.query(1, 0) == -1);
}

TEST_CASE("make_worker_model rejects unknown names") {
  const Problem p = make_problem(10, 3, 2, 1);
  CHECK_NOTHROW(make_worker_model("spammer-hammer", p, 1));
  CHECK_NOTHROW(make_worker_model("one-coin-malicious", p, 1));
  CHECK_THROWS_AS(make_worker_model("two-coin", p, 1), ConfigError);
}
