#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "faultline/errors.hpp"
#include "faultline/fixtures/seed.hpp"
#include "faultline/interceptor.hpp"
#include "faultline/interface_registry.hpp"
#include "faultline/value.hpp"

namespace faultline::fixtures {

/// Relational client surface: a single execute entry point taking the query
/// text and a parameter list, answering the result rows.
class SqlCommands {
 public:
  virtual ~SqlCommands() = default;
  virtual Value execute(const Value& query_text, const Value& params) = 0;
};

/// Reference backend: canned results keyed by the exact query and parameter
/// list. Unmatched queries answer an empty row set.
class InMemorySqlDatabase : public SqlCommands {
 public:
  Value execute(const Value& query_text, const Value& params) override {
    ++calls_["execute"];
    auto it = results_.find(result_key(query_text, params));
    return it == results_.end() ? Value::array() : it->second;
  }

  void seed_result(const Value& query_text, const Value& params, Value rows) {
    results_[result_key(query_text, params)] = std::move(rows);
  }

  /// Seed shape: [{"query": <text>, "params": <list>, "rows": <list>}, ...].
  void seed_from_file(const std::string& path) {
    const Value doc = read_seed_file(path);
    if (!doc.is_array())
      throw SchemaError(path + ": sql seed must be a JSON array");
    for (const auto& entry : doc) {
      if (!entry.is_object() || !entry.contains("query") ||
          !entry.contains("params") || !entry.contains("rows"))
        throw SchemaError(path +
                          ": each sql seed entry needs query, params, rows");
      results_[result_key(entry["query"], entry["params"])] = entry["rows"];
    }
  }

  std::size_t invocations(const std::string& method) const {
    auto it = calls_.find(method);
    return it == calls_.end() ? 0 : it->second;
  }

  std::map<std::string, std::size_t> counters() const { return calls_; }
  void reset_counters() { calls_.clear(); }

  void clear() {
    results_.clear();
    calls_.clear();
  }

 private:
  static std::string result_key(const Value& query_text, const Value& params) {
    return canonical_json(query_text) + "\n" + canonical_json(params);
  }

  std::map<std::string, Value> results_;
  std::map<std::string, std::size_t> calls_;
};

namespace detail {

class InterceptedSqlCommands : public SqlCommands {
 public:
  InterceptedSqlCommands(std::shared_ptr<SqlCommands> target,
                         Interceptor interceptor)
      : target_(std::move(target)), interceptor_(std::move(interceptor)) {}

  Value execute(const Value& query_text, const Value& params) override {
    return interceptor_.invoke_sync(
        "SqlCommands/execute", {query_text, params},
        [&] { return target_->execute(query_text, params); });
  }

 private:
  std::shared_ptr<SqlCommands> target_;
  Interceptor interceptor_;
};

}  // namespace detail
}  // namespace faultline::fixtures

namespace faultline {

template <>
struct interface_traits<fixtures::SqlCommands> {
  static InterfaceDecl declaration() {
    return InterfaceDecl{"SqlCommands", {{"execute", MethodKind::Sync}}};
  }

  static std::shared_ptr<fixtures::SqlCommands> wrap(
      std::shared_ptr<fixtures::SqlCommands> target, Interceptor interceptor) {
    return std::make_shared<fixtures::detail::InterceptedSqlCommands>(
        std::move(target), std::move(interceptor));
  }
};

}  // namespace faultline
