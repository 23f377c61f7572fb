#pragma once

// Newline-delimited JSON encoding of BBTA step logs.

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "crowdbandit/run.hpp"

namespace crowdbandit {

std::string step_log_to_json(const StepLog& log);
StepLog step_log_from_json(const std::string& line);  // throws FormatError

void write_trace(std::ostream& out, std::span<const StepLog> logs);
void write_trace(const std::filesystem::path& path, std::span<const StepLog> logs);
std::vector<StepLog> read_trace(const std::filesystem::path& path);

}  // namespace crowdbandit
