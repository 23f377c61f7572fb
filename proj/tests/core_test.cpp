#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <vector>

#include "crowdbandit/core.hpp"
#include "crowdbandit/errors.hpp"
#include "crowdbandit/rng.hpp"

using namespace crowdbandit;

namespace {

std::vector<Label> L(std::initializer_list<int> xs) {
  std::vector<Label> out;
  for (int x : xs) out.push_back(static_cast<Label>(x));
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "crowdbandit_core_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("weighted_vote on hand-computed cases") {
  SUBCASE("unanimous") {
    const auto r = weighted_vote(L({1, 1, 1}), std::vector<double>{1, 1, 1});
    CHECK(r.estimate == 1);
    CHECK(r.confidence == 1.0);
  }
  SUBCASE("exact tie resolves to +1") {
    const auto r = weighted_vote(L({1, -1, -1}), std::vector<double>{2, 1, 1});
    CHECK(r.raw_mean == 0.0);
    CHECK(r.estimate == 1);
    CHECK(r.confidence == 0.0);
  }
  SUBCASE("missing label keeps its weight in the denominator") {
    const auto r = weighted_vote(L({1, 0, -1}), std::vector<double>{3, 1, 1});
    CHECK(r.raw_mean == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(r.estimate == 1);
    CHECK(r.confidence == doctest::Approx(0.4).epsilon(1e-15));
  }
  SUBCASE("negative majority") {
    const auto r = weighted_vote(L({-1, -1, 1}), std::vector<double>{1, 1, 1});
    CHECK(r.estimate == -1);
    CHECK(r.raw_mean == doctest::Approx(-1.0 / 3.0));
  }
}

TEST_CASE("weighted_vote rejects bad inputs") {
  CHECK_THROWS_AS(weighted_vote(L({1, 1}), std::vector<double>{1, 0}), InvalidWeight);
  CHECK_THROWS_AS(weighted_vote(L({1, 1}), std::vector<double>{1, -2}), InvalidWeight);
  CHECK_THROWS_AS(weighted_vote(L({1, 1}), std::vector<double>{1, std::nan("")}), InvalidWeight);
  CHECK_THROWS_AS(weighted_vote(L({1, 1}), std::vector<double>{1, INFINITY}), InvalidWeight);
  CHECK_THROWS_AS(weighted_vote(L({1, 2}), std::vector<double>{1, 1}), InvalidLabel);
  CHECK_THROWS_AS(majority_vote(L({1, -3})), InvalidLabel);
}

TEST_CASE("majority_vote") {
  auto r = majority_vote(L({1, 1, -1}));
  CHECK(r.raw_mean == doctest::Approx(1.0 / 3.0));
  CHECK(r.estimate == 1);
  r = majority_vote(L({1, -1, 0, 0}));
  CHECK(r.raw_mean == 0.0);
  CHECK(r.estimate == 1);
}

TEST_CASE("majority_vote equals weighted_vote with uniform weights, exhaustively for K <= 6") {
  for (int k = 1; k <= 6; ++k) {
    int total = 1;
    for (int j = 0; j < k; ++j) total *= 3;
    const std::vector<double> ones(static_cast<std::size_t>(k), 1.0);
    for (int code = 0; code < total; ++code) {
      std::vector<Label> labels(static_cast<std::size_t>(k));
      int c = code;
      for (int j = 0; j < k; ++j, c /= 3) labels[j] = static_cast<Label>(c % 3 - 1);
      const auto m = majority_vote(labels);
      const auto w = weighted_vote(labels, ones);
      REQUIRE(m.raw_mean == w.raw_mean);
      REQUIRE(m.estimate == w.estimate);
      REQUIRE(m.confidence == w.confidence);
    }
  }
}

TEST_CASE("weighted_vote properties on random inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const int k = 1 + static_cast<int>(uniform_index(rng, 12));
    std::vector<Label> labels(static_cast<std::size_t>(k));
    std::vector<double> w(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) {
      labels[j] = static_cast<Label>(static_cast<int>(uniform_index(rng, 3)) - 1);
      w[j] = 0.01 + 10.0 * uniform01(rng);
    }
    const auto r = weighted_vote(labels, w);
    CHECK(r.confidence >= 0.0);
    CHECK(r.confidence <= 1.0);
    CHECK(r.confidence == std::abs(r.raw_mean));
    CHECK(r.estimate == (r.raw_mean >= 0.0 ? 1 : -1));

    // Confidence 1 iff every worker labeled and all agree.
    bool all_same = true;
    for (Label y : labels) all_same = all_same && y != 0 && y == labels[0];
    CHECK((r.confidence == doctest::Approx(1.0).epsilon(1e-12)) == all_same);

    // Scaling by a power of two is exact; any positive scale agrees to rounding.
    std::vector<double> doubled = w;
    for (double& x : doubled) x *= 4.0;
    const auto r2 = weighted_vote(labels, doubled);
    CHECK(r2.raw_mean == r.raw_mean);
    CHECK(r2.estimate == r.estimate);
    const double c = 0.001 + 100.0 * uniform01(rng);
    std::vector<double> scaled = w;
    for (double& x : scaled) x *= c;
    CHECK(weighted_vote(labels, scaled).raw_mean == doctest::Approx(r.raw_mean).epsilon(1e-12));
  }
}

TEST_CASE("accuracy counts matches") {
  CHECK(accuracy(L({1, -1, 1}), L({1, -1, 1})) == 1.0);
  CHECK(accuracy(L({1, -1, 1}), L({-1, 1, -1})) == 0.0);
  CHECK(accuracy(L({1, 1, 1, 1}), L({1, 1, 1, -1})) == 0.75);
  CHECK_THROWS(accuracy(L({1}), L({1, 1})));
}

TEST_CASE("Problem validation") {
  Problem p;
  p.num_contexts = 2;
  p.num_workers = 3;
  p.tasks = {{0, {0}, Label{1}}, {1, {1}, Label{-1}}};
  CHECK_NOTHROW(p.validate());
  CHECK(p.context_sizes() == std::vector<int>{1, 1});
  p.tasks[1].context.value = 2;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p.tasks[1].context.value = 1;
  p.tasks[1].id = 5;
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("label matrix and task CSV round trip") {
  LabelMatrix m(3, 4);
  m.set(0, 0, 1);
  m.set(1, 3, -1);
  m.set(2, 2, 1);
  CHECK_FALSE(m.complete());
  CHECK_THROWS_AS(m.set(0, 1, 5), InvalidLabel);
  const auto path = temp_file("m.csv");
  write_label_matrix(path, m);
  CHECK(read_label_matrix(path) == m);

  std::vector<Task> tasks = {{0, {0}, Label{1}}, {1, {2}, std::nullopt}, {2, {1}, Label{-1}}};
  const auto tpath = temp_file("t.csv");
  write_tasks(tpath, tasks);
  const auto back = read_tasks(tpath);
  REQUIRE(back.size() == 3);
  CHECK(back[1].context.value == 2);
  CHECK_FALSE(back[1].true_label.has_value());
  CHECK(*back[2].true_label == -1);
}

TEST_CASE("malformed CSV files are rejected") {
  const auto path = temp_file("bad.csv");
  {
    std::ofstream(path) << "1,0\n1\n";
  }
  CHECK_THROWS_AS(read_label_matrix(path), FormatError);
  {
    std::ofstream(path) << "1,2\n";
  }
  CHECK_THROWS_AS(read_label_matrix(path), FormatError);
  {
    std::ofstream(path) << "1,x\n";
  }
  CHECK_THROWS_AS(read_label_matrix(path), FormatError);
  {
    std::ofstream(path) << "task,ctx,label\n0,0,1\n";
  }
  CHECK_THROWS_AS(read_tasks(path), FormatError);
  {
    std::ofstream(path) << "id,context,true_label\n0,0,3\n";
  }
  CHECK_THROWS_AS(read_tasks(path), FormatError);
  CHECK_THROWS_AS(read_label_matrix(temp_file("does_not_exist.csv")), FormatError);
}
