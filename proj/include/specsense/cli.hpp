#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace specsense::cli {

inline constexpr const char* kSchemaVersion = "1.0";

/// One command's output: a parameter block and a numeric table.
struct OutputRecord {
  std::string schema_version = kSchemaVersion;
  std::string command;
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// RFC 4180 CSV. Every row repeats schema_version, command and the
/// parameters, then the numeric columns printed with 17 significant digits.
void write_csv(const OutputRecord& record, std::ostream& out);
void write_json(const OutputRecord& record, std::ostream& out);

/// Runs the command line (without the program name). Returns 0 on success,
/// 1 when a computation fails to converge and 2 on argument errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace specsense::cli
