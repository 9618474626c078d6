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

/// Document-store client surface: JSON documents addressed by collection and
/// key, with synchronous and deferred variants of both operations.
class DocumentCommands {
 public:
  virtual ~DocumentCommands() = default;
  virtual Value fetch(const Value& collection, const Value& key) = 0;
  virtual Value store(const Value& collection, const Value& key,
                      const Value& document) = 0;
  virtual DeferredHandle async_fetch(const Value& collection,
                                     const Value& key) = 0;
  virtual DeferredHandle async_store(const Value& collection, const Value& key,
                                     const Value& document) = 0;
};

/// Reference backend: nested in-memory maps with per-method call counters.
/// Missing documents read as null; store echoes the stored document.
class InMemoryDocumentStore : public DocumentCommands {
 public:
  Value fetch(const Value& collection, const Value& key) override {
    ++calls_["fetch"];
    return lookup(collection, key);
  }

  Value store(const Value& collection, const Value& key,
              const Value& document) override {
    ++calls_["store"];
    collections_[name_of(collection)][name_of(key)] = document;
    return document;
  }

  DeferredHandle async_fetch(const Value& collection, const Value& key) override {
    ++calls_["async_fetch"];
    return DeferredHandle::resolved(lookup(collection, key));
  }

  DeferredHandle async_store(const Value& collection, const Value& key,
                             const Value& document) override {
    ++calls_["async_store"];
    collections_[name_of(collection)][name_of(key)] = document;
    return DeferredHandle::resolved(document);
  }

  void seed(const Value& collection, const Value& key, Value document) {
    collections_[name_of(collection)][name_of(key)] = std::move(document);
  }

  /// Seed shape: {"<collection>": {"<key>": <document>, ...}, ...}.
  void seed_from_file(const std::string& path) {
    const Value doc = read_seed_file(path);
    if (!doc.is_object())
      throw SchemaError(path + ": document seed must be a JSON object");
    for (const auto& [collection, entries] : doc.items()) {
      if (!entries.is_object())
        throw SchemaError(path + ": collection '" + collection +
                          "' must be a JSON object");
      for (const auto& [key, document] : entries.items())
        collections_[collection][key] = document;
    }
  }

  std::size_t invocations(const std::string& method) const {
    auto it = calls_.find(method);
    return it == calls_.end() ? 0 : it->second;
  }

  std::map<std::string, std::size_t> counters() const { return calls_; }
  void reset_counters() { calls_.clear(); }

  void clear() {
    collections_.clear();
    calls_.clear();
  }

 private:
  static std::string name_of(const Value& v) {
    return v.is_string() ? v.get<std::string>() : canonical_json(v);
  }

  Value lookup(const Value& collection, const Value& key) const {
    auto c = collections_.find(name_of(collection));
    if (c == collections_.end()) return Value(nullptr);
    auto it = c->second.find(name_of(key));
    return it == c->second.end() ? Value(nullptr) : it->second;
  }

  std::map<std::string, std::map<std::string, Value>> collections_;
  std::map<std::string, std::size_t> calls_;
};

namespace detail {

class InterceptedDocumentCommands : public DocumentCommands {
 public:
  InterceptedDocumentCommands(std::shared_ptr<DocumentCommands> target,
                              Interceptor interceptor)
      : target_(std::move(target)), interceptor_(std::move(interceptor)) {}

  Value fetch(const Value& collection, const Value& key) override {
    return interceptor_.invoke_sync(
        "DocumentCommands/fetch", {collection, key},
        [&] { return target_->fetch(collection, key); });
  }

  Value store(const Value& collection, const Value& key,
              const Value& document) override {
    return interceptor_.invoke_sync(
        "DocumentCommands/store", {collection, key, document},
        [&] { return target_->store(collection, key, document); });
  }

  DeferredHandle async_fetch(const Value& collection, const Value& key) override {
    return interceptor_.invoke_async(
        "DocumentCommands/async_fetch", {collection, key},
        [&] { return target_->async_fetch(collection, key); });
  }

  DeferredHandle async_store(const Value& collection, const Value& key,
                             const Value& document) override {
    return interceptor_.invoke_async(
        "DocumentCommands/async_store", {collection, key, document},
        [&] { return target_->async_store(collection, key, document); });
  }

 private:
  std::shared_ptr<DocumentCommands> target_;
  Interceptor interceptor_;
};

}  // namespace detail
}  // namespace faultline::fixtures

namespace faultline {

template <>
struct interface_traits<fixtures::DocumentCommands> {
  static InterfaceDecl declaration() {
    return InterfaceDecl{"DocumentCommands",
                         {{"fetch", MethodKind::Sync},
                          {"store", MethodKind::Sync},
                          {"async_fetch", MethodKind::Async},
                          {"async_store", MethodKind::Async}}};
  }

  static std::shared_ptr<fixtures::DocumentCommands> wrap(
      std::shared_ptr<fixtures::DocumentCommands> target,
      Interceptor interceptor) {
    return std::make_shared<fixtures::detail::InterceptedDocumentCommands>(
        std::move(target), std::move(interceptor));
  }
};

}  // namespace faultline
