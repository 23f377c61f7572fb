#include "crowdbandit/trace.hpp"

#include <fstream>
#include <ostream>

#include <json.hpp>

#include "crowdbandit/errors.hpp"

namespace crowdbandit {

using nlohmann::json;

std::string step_log_to_json(const StepLog& log) {
  json labels = json::array();
  for (Label y : log.counterfactual_labels) labels.push_back(static_cast<int>(y));
  const json j = {
      {"step", log.step},
      {"task", log.task},
      {"context", log.context.value},
      {"distribution", log.distribution},
      {"chosen_worker", log.chosen_worker},
      {"chosen_label", static_cast<int>(log.chosen_label)},
      {"realized_loss", log.realized_loss},
      {"counterfactual_labels", labels},
  };
  return j.dump();
}

StepLog step_log_from_json(const std::string& line) {
  try {
    const json j = json::parse(line);
    StepLog log;
    log.step = j.at("step").get<std::int64_t>();
    log.task = j.at("task").get<int>();
    log.context.value = j.at("context").get<int>();
    log.distribution = j.at("distribution").get<std::vector<double>>();
    log.chosen_worker = j.at("chosen_worker").get<int>();
    const int chosen = j.at("chosen_label").get<int>();
    if (chosen != 1 && chosen != -1) throw FormatError("chosen_label must be -1 or 1");
    log.chosen_label = static_cast<Label>(chosen);
    log.realized_loss = j.at("realized_loss").get<int>();
    if (log.realized_loss != 0 && log.realized_loss != 1)
      throw FormatError("realized_loss must be 0 or 1");
    for (int y : j.at("counterfactual_labels").get<std::vector<int>>()) {
      if (y != 1 && y != -1) throw FormatError("counterfactual labels must be -1 or 1");
      log.counterfactual_labels.push_back(static_cast<Label>(y));
    }
    return log;
  } catch (const json::exception& e) {
    throw FormatError(std::string("malformed step log: ") + e.what());
  }
}

void write_trace(std::ostream& out, std::span<const StepLog> logs) {
  for (const StepLog& log : logs) out << step_log_to_json(log) << '\n';
}

void write_trace(const std::filesystem::path& path, std::span<const StepLog> logs) {
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write " + path.string());
  write_trace(out, logs);
}

std::vector<StepLog> read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<StepLog> logs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      logs.push_back(step_log_from_json(line));
    } catch (const FormatError& e) {
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return logs;
}

}  // namespace crowdbandit
