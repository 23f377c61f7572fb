#pragma once

// Domain types shared by every strategy: tasks with a discrete context,
// a dense label matrix over {-1, 0, +1}, and the two aggregation rules.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace crowdbandit {

// A single crowd label. 0 marks "not collected".
using Label = std::int8_t;

inline constexpr Label kMissing = 0;

// sign(0) := +1 everywhere in the library.
inline constexpr Label sign_label(double x) { return x >= 0.0 ? Label{1} : Label{-1}; }

inline constexpr bool is_valid_label(int y) { return y == -1 || y == 0 || y == 1; }

struct ContextId {
  int value = 0;
  friend constexpr bool operator==(ContextId, ContextId) = default;
};

struct Task {
  int id = 0;
  ContextId context;
  std::optional<Label> true_label;
};

// A problem instance: N tasks over S contexts labeled by a pool of K workers.
struct Problem {
  std::vector<Task> tasks;
  int num_contexts = 1;
  int num_workers = 0;

  int num_tasks() const { return static_cast<int>(tasks.size()); }
  // Number of tasks carrying each context.
  std::vector<int> context_sizes() const;
  // Throws ConfigError if ids are not dense or a context is out of range.
  void validate() const;
};

class LabelMatrix {
 public:
  LabelMatrix() = default;
  LabelMatrix(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Label at(int task, int worker) const { return data_[index(task, worker)]; }
  // Throws InvalidLabel unless y is in {-1, 0, +1}.
  void set(int task, int worker, int y);

  std::span<const Label> row(int task) const {
    return {data_.data() + static_cast<std::size_t>(task) * cols_, static_cast<std::size_t>(cols_)};
  }

  bool complete() const;
  friend bool operator==(const LabelMatrix&, const LabelMatrix&) = default;

 private:
  std::size_t index(int task, int worker) const {
    return static_cast<std::size_t>(task) * cols_ + worker;
  }

  int rows_ = 0;
  int cols_ = 0;
  std::vector<Label> data_;
};

struct AggregateResult {
  Label estimate = 1;
  double confidence = 0.0;
  double raw_mean = 0.0;
};

// Weighted vote: raw_mean = sum_j w_j y_j / sum_j w_j. Missing labels add
// nothing to the numerator but keep their weight in the denominator.
AggregateResult weighted_vote(std::span<const Label> labels, std::span<const double> weights);

// Weighted vote with all weights equal.
AggregateResult majority_vote(std::span<const Label> labels);

// Fraction of estimates matching the ground truth.
double accuracy(std::span<const Label> estimates, std::span<const Label> truths);

// Ground-truth labels of all tasks; throws ConfigError if any is missing.
std::vector<Label> truths_of(const Problem& problem);

// CSV I/O. Matrix files: N rows of K integers in {-1,0,1}, no header.
// Task files: header `id,context,true_label`, true_label may be empty.
LabelMatrix read_label_matrix(const std::filesystem::path& path);
void write_label_matrix(const std::filesystem::path& path, const LabelMatrix& matrix);
std::vector<Task> read_tasks(const std::filesystem::path& path);
void write_tasks(const std::filesystem::path& path, std::span<const Task> tasks);

}  // namespace crowdbandit
