#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "faultline/catalog.hpp"
#include "faultline/check.hpp"
#include "faultline/deferred.hpp"
#include "faultline/explorer.hpp"
#include "faultline/fixtures/catalogs.hpp"
#include "faultline/fixtures/document_client.hpp"
#include "faultline/fixtures/kv_client.hpp"
#include "faultline/fixtures/sql_client.hpp"
#include "faultline/session.hpp"
#include "faultline/value.hpp"

namespace faultline::fixtures {

/// One ready-to-run instantiation of a scenario: the test body plus the
/// backing stores, exposed so tests can inspect invocation counters.
struct ScenarioInstance {
  TestFn body;
  std::shared_ptr<InMemoryKeyValueStore> kv_store;
  std::shared_ptr<InMemoryDocumentStore> doc_store;
  std::shared_ptr<InMemorySqlDatabase> sql_db;
};

/// A bundled demo scenario the command-line driver can run by name. Bodies
/// are created fresh per exploration; stores persist across the iterations
/// of one exploration, so bundled bodies only read.
struct Scenario {
  std::string name;
  std::string test_id;
  std::string description;
  bool enable_cache_miss_default = false;
  ScenarioInstance (*instantiate)() = nullptr;
  CatalogSet (*default_catalogs)() = nullptr;
};

namespace detail {

inline Value fig2_profile_document() {
  Value profile = Value::object();
  profile["last_visited_profile"] = "joe_bloggs";
  profile["is_verified"] = true;
  profile["email"] = "john@gmail.com";
  return profile;
}

inline ScenarioInstance make_fig2_instance() {
  ScenarioInstance instance;
  instance.kv_store = std::make_shared<InMemoryKeyValueStore>();
  instance.kv_store->seed(Value("john_doe"), fig2_profile_document());
  instance.kv_store->seed(Value("joe_bloggs"), Value("joe_bloggs"));

  auto store = instance.kv_store;
  auto client = std::make_shared<std::shared_ptr<KeyValueCommands>>();
  instance.body = [store, client](TestContext& ctx) {
    if (!*client)
      *client = create_interceptor<KeyValueCommands>(store, "memory://users",
                                                     ctx.session());
    Value profile = (*client)->get(Value("john_doe"));
    test_assert(profile.is_object(), "profile document must be an object");
    test_assert(profile.contains("last_visited_profile") &&
                    profile["last_visited_profile"].is_string(),
                "last_visited_profile must be a string");
    DeferredHandle pending =
        (*client)->async_get(profile["last_visited_profile"]);
    Value visited = resolve_deferred(pending);
    assert_equal(visited, Value("joe_bloggs"), "last visited profile");
  };
  return instance;
}

inline CatalogSet fig2_catalogs() {
  CatalogSet set;
  set.add(kv_client_catalog());
  return set;
}

inline Value fallback_profile_document() {
  Value profile = Value::object();
  profile["display_name"] = "Jane";
  profile["plan"] = "pro";
  return profile;
}

inline ScenarioInstance make_fallback_instance() {
  ScenarioInstance instance;
  instance.kv_store = std::make_shared<InMemoryKeyValueStore>();
  instance.doc_store = std::make_shared<InMemoryDocumentStore>();
  instance.kv_store->seed(Value("profile:jane"), fallback_profile_document());
  instance.doc_store->seed(Value("profiles"), Value("jane"),
                           fallback_profile_document());

  auto cache = instance.kv_store;
  auto documents = instance.doc_store;
  auto cache_client = std::make_shared<std::shared_ptr<KeyValueCommands>>();
  auto doc_client = std::make_shared<std::shared_ptr<DocumentCommands>>();
  instance.body = [cache, documents, cache_client,
                   doc_client](TestContext& ctx) {
    if (!*cache_client) {
      *cache_client = create_interceptor<KeyValueCommands>(
          cache, "memory://cache", ctx.session());
      *doc_client = create_interceptor<DocumentCommands>(
          documents, "memory://documents", ctx.session());
    }
    Value profile;
    try {
      profile = (*cache_client)->get(Value("profile:jane"));
    } catch (const std::exception&) {
      profile = Value(nullptr);
    }
    if (!profile.is_object()) {
      try {
        profile = (*doc_client)->fetch(Value("profiles"), Value("jane"));
      } catch (const std::exception&) {
        profile = Value(nullptr);
      }
    }
    if (!ctx.was_fault_injected()) {
      test_assert(profile.is_object(), "profile must resolve from some tier");
      assert_equal(profile["display_name"], Value("Jane"), "display name");
    }
  };
  return instance;
}

inline CatalogSet fallback_catalogs() {
  CatalogSet set;
  set.add(kv_client_catalog());
  set.add(doc_client_catalog());
  return set;
}

}  // namespace detail

inline const std::vector<Scenario>& scenarios() {
  static const std::vector<Scenario> all = {
      Scenario{"fig2", "fig2/user_profile_login",
               "user-profile login flow: one cached profile read plus a "
               "deferred follow-up read of the last visited profile",
               false, &detail::make_fig2_instance, &detail::fig2_catalogs},
      Scenario{"fallback", "fallback/cache_then_document_store",
               "cache-then-fallback read path: a cache miss or error falls "
               "back to the document store; assertions are fault-aware",
               true, &detail::make_fallback_instance,
               &detail::fallback_catalogs},
  };
  return all;
}

inline const Scenario* find_scenario(std::string_view name) {
  for (const auto& scenario : scenarios())
    if (scenario.name == name) return &scenario;
  return nullptr;
}

inline const Scenario* find_scenario_by_test_id(std::string_view test_id) {
  for (const auto& scenario : scenarios())
    if (scenario.test_id == test_id) return &scenario;
  return nullptr;
}

}  // namespace faultline::fixtures
