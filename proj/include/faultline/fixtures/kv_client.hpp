#pragma once

#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "faultline/deferred.hpp"
#include "faultline/errors.hpp"
#include "faultline/fixtures/seed.hpp"
#include "faultline/interceptor.hpp"
#include "faultline/interface_registry.hpp"
#include "faultline/value.hpp"

namespace faultline::fixtures {

/// Minimal key-value client surface: arbitrary JSON documents keyed by
/// string, with synchronous and deferred variants of both operations.
class KeyValueCommands {
 public:
  virtual ~KeyValueCommands() = default;
  virtual Value get(const Value& key) = 0;
  virtual Value set(const Value& key, const Value& value) = 0;
  virtual DeferredHandle async_get(const Value& key) = 0;
  virtual DeferredHandle async_set(const Value& key, const Value& value) = 0;
};

/// Reference backend: a process-local map with per-method call counters so
/// tests can observe which calls actually reached the store. Missing keys
/// read as null; writes answer "OK". Async variants resolve immediately.
class InMemoryKeyValueStore : public KeyValueCommands {
 public:
  Value get(const Value& key) override {
    ++calls_["get"];
    return lookup(key);
  }

  Value set(const Value& key, const Value& value) override {
    ++calls_["set"];
    data_[key_of(key)] = value;
    return Value("OK");
  }

  DeferredHandle async_get(const Value& key) override {
    ++calls_["async_get"];
    return DeferredHandle::resolved(lookup(key));
  }

  DeferredHandle async_set(const Value& key, const Value& value) override {
    ++calls_["async_set"];
    data_[key_of(key)] = value;
    return DeferredHandle::resolved(Value("OK"));
  }

  void seed(const Value& key, Value value) {
    data_[key_of(key)] = std::move(value);
  }

  /// Seed shape: one JSON object mapping keys to stored values.
  void seed_from_file(const std::string& path) {
    const Value doc = read_seed_file(path);
    if (!doc.is_object())
      throw SchemaError(path + ": key-value seed must be a JSON object");
    for (const auto& [key, value] : doc.items()) data_[key] = value;
  }

  std::size_t invocations(const std::string& method) const {
    auto it = calls_.find(method);
    return it == calls_.end() ? 0 : it->second;
  }

  std::map<std::string, std::size_t> counters() const { return calls_; }
  void reset_counters() { calls_.clear(); }

  void clear() {
    data_.clear();
    calls_.clear();
  }

 private:
  static std::string key_of(const Value& key) {
    return key.is_string() ? key.get<std::string>() : canonical_json(key);
  }

  Value lookup(const Value& key) const {
    auto it = data_.find(key_of(key));
    return it == data_.end() ? Value(nullptr) : it->second;
  }

  std::map<std::string, Value> data_;
  std::map<std::string, std::size_t> calls_;
};

namespace detail {

class InterceptedKeyValueCommands : public KeyValueCommands {
 public:
  InterceptedKeyValueCommands(std::shared_ptr<KeyValueCommands> target,
                              Interceptor interceptor)
      : target_(std::move(target)), interceptor_(std::move(interceptor)) {}

  Value get(const Value& key) override {
    return interceptor_.invoke_sync("KeyValueCommands/get", {key},
                                    [&] { return target_->get(key); });
  }

  Value set(const Value& key, const Value& value) override {
    return interceptor_.invoke_sync("KeyValueCommands/set", {key, value},
                                    [&] { return target_->set(key, value); });
  }

  DeferredHandle async_get(const Value& key) override {
    return interceptor_.invoke_async("KeyValueCommands/async_get", {key},
                                     [&] { return target_->async_get(key); });
  }

  DeferredHandle async_set(const Value& key, const Value& value) override {
    return interceptor_.invoke_async(
        "KeyValueCommands/async_set", {key, value},
        [&] { return target_->async_set(key, value); });
  }

 private:
  std::shared_ptr<KeyValueCommands> target_;
  Interceptor interceptor_;
};

}  // namespace detail
}  // namespace faultline::fixtures

namespace faultline {

template <>
struct interface_traits<fixtures::KeyValueCommands> {
  static InterfaceDecl declaration() {
    return InterfaceDecl{"KeyValueCommands",
                         {{"get", MethodKind::Sync},
                          {"set", MethodKind::Sync},
                          {"async_get", MethodKind::Async},
                          {"async_set", MethodKind::Async}}};
  }

  static std::shared_ptr<fixtures::KeyValueCommands> wrap(
      std::shared_ptr<fixtures::KeyValueCommands> target,
      Interceptor interceptor) {
    return std::make_shared<fixtures::detail::InterceptedKeyValueCommands>(
        std::move(target), std::move(interceptor));
  }
};

}  // namespace faultline
