#include "crowdbandit/core.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

std::vector<int> Problem::context_sizes() const {
  std::vector<int> sizes(static_cast<std::size_t>(num_contexts), 0);
  for (const Task& t : tasks) ++sizes[static_cast<std::size_t>(t.context.value)];
  return sizes;
}

void Problem::validate() const {
  if (num_contexts < 1) throw ConfigError("number of contexts must be >= 1");
  if (num_workers < 1) throw ConfigError("number of workers must be >= 1");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id != static_cast<int>(i))
      throw ConfigError("task ids must be dense and ordered; got id " +
                        std::to_string(tasks[i].id) + " at row " + std::to_string(i));
    const int s = tasks[i].context.value;
    if (s < 0 || s >= num_contexts)
      throw ConfigError("task " + std::to_string(i) + " has context " + std::to_string(s) +
                        " outside [0, " + std::to_string(num_contexts) + ")");
    if (tasks[i].true_label && *tasks[i].true_label != 1 && *tasks[i].true_label != -1)
      throw InvalidLabel("true label must be -1 or +1");
  }
}

LabelMatrix::LabelMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix shape");
  data_.assign(static_cast<std::size_t>(rows) * cols, kMissing);
}

void LabelMatrix::set(int task, int worker, int y) {
  if (!is_valid_label(y)) throw InvalidLabel("label " + std::to_string(y) + " not in {-1,0,1}");
  data_[index(task, worker)] = static_cast<Label>(y);
}

bool LabelMatrix::complete() const {
  for (Label y : data_)
    if (y == kMissing) return false;
  return true;
}

namespace {

AggregateResult finish(double raw_mean) {
  return {sign_label(raw_mean), std::abs(raw_mean), raw_mean};
}

void check_label(Label y) {
  if (!is_valid_label(y)) throw InvalidLabel("label " + std::to_string(y) + " not in {-1,0,1}");
}

}  // namespace

AggregateResult weighted_vote(std::span<const Label> labels, std::span<const double> weights) {
  if (labels.size() != weights.size())
    throw std::invalid_argument("weighted_vote: labels and weights differ in length");
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < labels.size(); ++j) {
    const double w = weights[j];
    if (!(w > 0.0) || !std::isfinite(w))
      throw InvalidWeight("weight " + std::to_string(j) + " must be positive and finite");
    check_label(labels[j]);
    num += w * labels[j];
    den += w;
  }
  if (den == 0.0) throw InvalidWeight("weighted_vote: empty weight vector");
  return finish(num / den);
}

AggregateResult majority_vote(std::span<const Label> labels) {
  if (labels.empty()) throw std::invalid_argument("majority_vote: empty label vector");
  int sum = 0;
  for (Label y : labels) {
    check_label(y);
    sum += y;
  }
  return finish(static_cast<double>(sum) / static_cast<double>(labels.size()));
}

double accuracy(std::span<const Label> estimates, std::span<const Label> truths) {
  if (estimates.size() != truths.size())
    throw std::invalid_argument("accuracy: estimates and truths differ in length");
  if (truths.empty()) return 0.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < truths.size(); ++i) hits += estimates[i] == truths[i];
  return static_cast<double>(hits) / static_cast<double>(truths.size());
}

std::vector<Label> truths_of(const Problem& problem) {
  std::vector<Label> out;
  out.reserve(problem.tasks.size());
  for (const Task& t : problem.tasks) {
    if (!t.true_label) throw ConfigError("task " + std::to_string(t.id) + " has no true label");
    out.push_back(*t.true_label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

int parse_int(const std::string& raw, const std::filesystem::path& path, int line_no) {
  const std::string s = trim(raw);
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size())
    throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected integer, got '" +
                      s + "'");
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  return in;
}

}  // namespace

LabelMatrix read_label_matrix(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<std::vector<int>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<int> row;
    for (const auto& cell : split_csv(line)) {
      const int y = parse_int(cell, path, line_no);
      if (!is_valid_label(y))
        throw FormatError(path.string() + ":" + std::to_string(line_no) + ": label " +
                          std::to_string(y) + " not in {-1,0,1}");
      row.push_back(y);
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": ragged row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError(path.string() + ": empty label matrix");
  LabelMatrix m(static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m.set(i, j, rows[i][j]);
  return m;
}

void write_label_matrix(const std::filesystem::path& path, const LabelMatrix& matrix) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  for (int i = 0; i < matrix.rows(); ++i) {
    for (int j = 0; j < matrix.cols(); ++j) {
      if (j) out << ',';
      out << static_cast<int>(matrix.at(i, j));
    }
    out << '\n';
  }
}

std::vector<Task> read_tasks(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line) || trim(line) != "id,context,true_label")
    throw FormatError(path.string() + ": expected header 'id,context,true_label'");
  std::vector<Task> tasks;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 3)
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": expected 3 columns");
    Task t;
    t.id = parse_int(cells[0], path, line_no);
    t.context.value = parse_int(cells[1], path, line_no);
    if (!trim(cells[2]).empty()) {
      const int y = parse_int(cells[2], path, line_no);
      if (y != 1 && y != -1)
        throw FormatError(path.string() + ":" + std::to_string(line_no) +
                          ": true_label must be -1 or 1");
      t.true_label = static_cast<Label>(y);
    }
    tasks.push_back(t);
  }
  return tasks;
}

void write_tasks(const std::filesystem::path& path, std::span<const Task> tasks) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  out << "id,context,true_label\n";
  for (const Task& t : tasks) {
    out << t.id << ',' << t.context.value << ',';
    if (t.true_label) out << static_cast<int>(*t.true_label);
    out << '\n';
  }
}

}  // namespace crowdbandit
