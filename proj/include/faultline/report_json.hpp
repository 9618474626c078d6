#pragma once

#include <fstream>
#include <string>

#include "faultline/errors.hpp"
#include "faultline/explorer.hpp"
#include "faultline/report.hpp"
#include "faultline/trace.hpp"
#include "faultline/value.hpp"

namespace faultline {

inline Value to_value(const IterationOutcome& outcome) {
  Value out = Value::object();
  out["index"] = outcome.index;
  out["baseline"] = outcome.assignment.empty();
  out["status"] = std::string(to_string(outcome.status));
  out["message"] = outcome.message;
  Value assignment = Value::array();
  for (const auto& entry : outcome.assignment.entries) {
    Value row = Value::object();
    row["site"] = entry.site.value;
    row["method"] = entry.method_fqn;
    row["fault"] = to_value(entry.fault);
    row["reached"] = fault_reached(entry, outcome.trace);
    assignment.push_back(std::move(row));
  }
  out["assignment"] = std::move(assignment);
  Value trace = Value::array();
  for (const auto& record : outcome.trace.records) {
    Value row = to_value(record);
    row["category"] = std::string(to_string(category_of(record)));
    trace.push_back(std::move(row));
  }
  out["trace"] = std::move(trace);
  return out;
}

/// Full report document. `generated_at` is the only run-dependent field;
/// everything else is a deterministic function of the test and config.
inline Value build_report_value(const ExplorationResult& result) {
  Value out = Value::object();
  out["schema_version"] = 1;
  out["generated_at"] = current_utc_timestamp();
  out["test_block_digest"] = result.test_block_digest;
  out["test_name"] = result.test_name;
  out["config"] = result.config_snapshot;
  Value iterations = Value::array();
  for (const auto& outcome : result.iterations)
    iterations.push_back(to_value(outcome));
  out["iterations"] = std::move(iterations);
  Value summary = Value::object();
  summary["total"] = result.iterations.size();
  summary["passed"] = result.count(TestStatus::Passed);
  summary["failed"] = result.count(TestStatus::Failed);
  summary["errored"] = result.count(TestStatus::Errored);
  summary["truncated"] = result.truncated;
  summary["warnings"] = result.warnings;
  out["summary"] = std::move(summary);
  return out;
}

inline std::string render_json_report(const ExplorationResult& result) {
  return build_report_value(result).dump(2) + "\n";
}

inline void write_json_report(const ExplorationResult& result,
                              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report file '" + path + "'");
  out << render_json_report(result);
}

}  // namespace faultline
