#include <catch2/catch_amalgamated.hpp>

#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "faultline/check.hpp"
#include "faultline/digest.hpp"
#include "faultline/explorer.hpp"
#include "faultline/fixtures/kv_client.hpp"

using namespace faultline;
using fixtures::InMemoryKeyValueStore;
using fixtures::KeyValueCommands;

namespace {

std::shared_ptr<KeyValueCommands> wrap(
    const std::shared_ptr<InMemoryKeyValueStore>& backing, TestContext& ctx) {
  return create_interceptor<KeyValueCommands>(backing, "redis://test",
                                              ctx.session());
}

/// get("a") answers "ab" (2 corruption steps), get("b") answers "xyz" (3).
struct TwoSiteScenario {
  std::shared_ptr<InMemoryKeyValueStore> backing =
      std::make_shared<InMemoryKeyValueStore>();
  TestFn body;

  TwoSiteScenario() {
    backing->seed(Value("a"), Value("ab"));
    backing->seed(Value("b"), Value("xyz"));
    body = [backing = backing](TestContext& ctx) {
      auto client = wrap(backing, ctx);
      client->get(Value("a"));
      client->get(Value("b"));
    };
  }
};

std::size_t byzantine_context(const AssignedFault& entry) {
  return std::get<ByzantineFault>(entry.fault).state.context;
}

}  // namespace

TEST_CASE("a test without client calls explores only the baseline") {
  ExplorationResult result =
      run_exploration("quiet", [](TestContext&) {}, ExplorationConfig{});
  REQUIRE(result.iterations.size() == 1);
  CHECK(result.iterations[0].index == 0);
  CHECK(result.iterations[0].assignment.empty());
  CHECK(result.iterations[0].status == TestStatus::Passed);
  CHECK_FALSE(result.truncated);
  CHECK(result.warnings.empty());
  CHECK(result.test_name == "quiet");
  CHECK(result.test_block_digest == sha1_hex("quiet"));
  CHECK(result.iterations[0].trace.test_block_digest == sha1_hex("quiet"));
}

TEST_CASE("a failing baseline aborts the exploration") {
  CHECK_THROWS_AS(
      run_exploration(
          "broken", [](TestContext&) { test_assert(false, "expected"); },
          ExplorationConfig{}),
      BaselineFailedError);
  try {
    run_exploration(
        "broken",
        [](TestContext&) { throw std::runtime_error("backend down"); },
        ExplorationConfig{});
    FAIL("expected BaselineFailedError");
  } catch (const BaselineFailedError& e) {
    CHECK(std::string(e.what()) ==
          "baseline iteration errored: backend down");
  }
}

TEST_CASE("singles run before combinations, in enumeration order") {
  TwoSiteScenario scenario;
  ExplorationConfig config;
  config.max_combination_size = 2;
  ExplorationResult result =
      run_exploration("two_site", scenario.body, config);

  // 1 baseline + (2 + 3) singles + 2*3 pairs.
  REQUIRE(result.iterations.size() == 12);
  CHECK(result.count(TestStatus::Passed) == 12);
  CHECK_FALSE(result.truncated);

  const CallSiteId site_a = result.iterations[0].trace.records[0].site;
  const CallSiteId site_b = result.iterations[0].trace.records[1].site;

  for (std::size_t i = 1; i <= 5; ++i)
    CHECK(result.iterations[i].assignment.size() == 1);
  for (std::size_t i = 6; i <= 11; ++i)
    CHECK(result.iterations[i].assignment.size() == 2);

  // Singles: all of site a's steps, then site b's.
  for (std::size_t i = 1; i <= 2; ++i) {
    CHECK(result.iterations[i].assignment.entries[0].site == site_a);
    CHECK(byzantine_context(result.iterations[i].assignment.entries[0]) ==
          i - 1);
  }
  for (std::size_t i = 3; i <= 5; ++i) {
    CHECK(result.iterations[i].assignment.entries[0].site == site_b);
    CHECK(byzantine_context(result.iterations[i].assignment.entries[0]) ==
          i - 3);
  }

  // Pairs: cross product with the later site varying fastest.
  for (std::size_t i = 6; i <= 11; ++i) {
    const FaultAssignment& assignment = result.iterations[i].assignment;
    CHECK(assignment.entries[0].site == site_a);
    CHECK(assignment.entries[1].site == site_b);
    CHECK(byzantine_context(assignment.entries[0]) == (i - 6) / 3);
    CHECK(byzantine_context(assignment.entries[1]) == (i - 6) % 3);
  }
}

TEST_CASE("combination size one explores singles only") {
  TwoSiteScenario scenario;
  ExplorationConfig config;
  config.max_combination_size = 1;
  ExplorationResult result =
      run_exploration("two_site", scenario.body, config);
  REQUIRE(result.iterations.size() == 6);
  for (std::size_t i = 1; i < 6; ++i)
    CHECK(result.iterations[i].assignment.size() == 1);
}

TEST_CASE("the frontier deduplicates assignments by signature") {
  Frontier frontier;
  const CallSiteId site{"abcd"};
  FaultAssignment assignment{
      {{site, "I/m", ExceptionFault{"E", std::nullopt, "m", std::nullopt}}}};

  CHECK(frontier.push(assignment));
  CHECK_FALSE(frontier.push(assignment));  // already enqueued
  CHECK(frontier.size() == 1);
  CHECK(frontier.seen(assignment));

  FaultAssignment other;
  CHECK_FALSE(frontier.seen(other));
  frontier.mark_seen(other);
  CHECK(frontier.seen(other));
  CHECK_FALSE(frontier.push(other));  // marked seen without enqueueing
  CHECK(frontier.size() == 1);

  CHECK(frontier.pop().entries.size() == 1);
  CHECK(frontier.empty());
}

TEST_CASE("faults that reveal new methods extend the exploration") {
  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("k"), Value("v"));
  // The fallback write only happens when the read answers something else.
  TestFn body = [backing](TestContext& ctx) {
    auto client = wrap(backing, ctx);
    Value value = client->get(Value("k"));
    if (value != Value("v")) client->set(Value("fallback"), Value("noted"));
  };

  SECTION("discovered singles run standalone and merged") {
    ExplorationConfig config;
    config.max_combination_size = 2;
    ExplorationResult result = run_exploration("fallback_like", body, config);

    // 1 baseline + 1 get single + 2 set singles + 2 merged pairs.
    REQUIRE(result.iterations.size() == 6);
    std::size_t standalone_set = 0;
    std::size_t merged = 0;
    for (const auto& iteration : result.iterations) {
      bool touches_set = false;
      for (const auto& entry : iteration.assignment.entries)
        touches_set |= entry.method_fqn == "KeyValueCommands/set";
      if (!touches_set) continue;
      if (iteration.assignment.size() == 1)
        ++standalone_set;
      else
        ++merged;
    }
    CHECK(standalone_set == 2);
    CHECK(merged == 2);

    // The revealed method is absent from the baseline trace.
    CHECK_FALSE(
        result.iterations[0].trace.contains_method("KeyValueCommands/set"));
  }

  SECTION("merging is skipped when it would exceed the size budget") {
    ExplorationConfig config;
    config.max_combination_size = 1;
    ExplorationResult result = run_exploration("fallback_like", body, config);
    REQUIRE(result.iterations.size() == 4);  // baseline + 1 get + 2 set
    for (const auto& iteration : result.iterations)
      CHECK(iteration.assignment.size() <= 1);
  }
}

TEST_CASE("the iteration budget truncates exploration with a warning") {
  TwoSiteScenario scenario;
  ExplorationConfig config;
  config.max_combination_size = 2;
  config.max_iterations = 5;
  ExplorationResult result =
      run_exploration("two_site", scenario.body, config);

  REQUIRE(result.iterations.size() == 5);
  CHECK(result.truncated);
  REQUIRE(result.warnings.size() == 1);
  CHECK(result.warnings[0] ==
        "exploration truncated at max_iterations=5 with 7 assignments "
        "unexplored");

  SECTION("a budget of one runs just the baseline") {
    config.max_iterations = 1;
    ExplorationResult tiny =
        run_exploration("two_site", scenario.body, config);
    REQUIRE(tiny.iterations.size() == 1);
    CHECK(tiny.truncated);
  }
}

TEST_CASE("abort on first failure stops after the failing iteration") {
  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("k"), Value("ab"));
  TestFn body = [backing](TestContext& ctx) {
    auto client = wrap(backing, ctx);
    assert_equal(client->get(Value("k")), Value("ab"), "cached value");
  };

  ExplorationConfig config;
  config.abort_on_first_failure = true;
  ExplorationResult result = run_exploration("strict", body, config);

  REQUIRE(result.iterations.size() == 2);  // baseline + first failing single
  CHECK(result.iterations[1].status == TestStatus::Failed);
  CHECK_FALSE(result.iterations[1].message.empty());
  CHECK_FALSE(result.truncated);  // aborting is not truncation
}

TEST_CASE("unexpected exceptions classify as errors, assertions as failures") {
  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("k"), Value("ab"));
  TestFn body = [backing](TestContext& ctx) {
    auto client = wrap(backing, ctx);
    client->get(Value("k"));
    if (ctx.was_fault_injected()) throw std::runtime_error("boom");
  };
  ExplorationResult result = run_exploration("crashy", body,
                                             ExplorationConfig{});
  REQUIRE(result.iterations.size() == 3);
  CHECK(result.count(TestStatus::Passed) == 1);
  CHECK(result.count(TestStatus::Errored) == 2);
  CHECK(result.iterations[1].message == "boom");
}

TEST_CASE("nondeterministic unfaulted responses warn once per site") {
  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("x"), Value("0"));
  // The body mutates the backend, so later iterations read back a value the
  // baseline never saw.
  TestFn body = [backing](TestContext& ctx) {
    auto client = wrap(backing, ctx);
    Value value = client->get(Value("x"));
    const std::string text = value.is_string() ? value.get<std::string>() : "?";
    client->set(Value("x"), Value(text + "x"));
  };

  ExplorationConfig config;
  config.max_combination_size = 2;
  ExplorationResult result = run_exploration("drifty", body, config);

  std::size_t drift_warnings = 0;
  for (const auto& warning : result.warnings)
    if (warning.find("nondeterministic response at KeyValueCommands/get") !=
        std::string::npos)
      ++drift_warnings;
  CHECK(drift_warnings == 1);
}

TEST_CASE("frontier order does not change what gets explored") {
  TwoSiteScenario scenario;
  ExplorationConfig config;
  config.max_combination_size = 2;
  ExplorationResult plain = run_exploration("two_site", scenario.body, config);

  config.shuffle_frontier = true;
  config.shuffle_seed = 42;
  ExplorationResult shuffled =
      run_exploration("two_site", scenario.body, config);

  REQUIRE(plain.iterations.size() == shuffled.iterations.size());
  CHECK(plain.count(TestStatus::Passed) == shuffled.count(TestStatus::Passed));

  auto signatures = [](const ExplorationResult& result) {
    std::set<std::string> out;
    for (const auto& iteration : result.iterations)
      out.insert(assignment_signature(iteration.assignment));
    return out;
  };
  CHECK(signatures(plain) == signatures(shuffled));
}

TEST_CASE("cache misses skip substitutions equal to the real response") {
  ExplorationConfig config;
  config.enable_cache_miss = true;

  SECTION("an empty-string response drops the empty-string step") {
    auto backing = std::make_shared<InMemoryKeyValueStore>();
    backing->seed(Value("k"), Value(""));
    TestFn body = [backing](TestContext& ctx) {
      wrap(backing, ctx)->get(Value("k"));
    };
    ExplorationResult result = run_exploration("empty_hit", body, config);

    // "" has no corruption steps; cache miss contributes null and [].
    REQUIRE(result.iterations.size() == 3);
    std::set<std::size_t> contexts;
    for (std::size_t i = 1; i < result.iterations.size(); ++i) {
      const auto& fault = std::get<ByzantineFault>(
          result.iterations[i].assignment.entries[0].fault);
      CHECK(fault.transformer_id == "cache_miss");
      contexts.insert(fault.state.context);
    }
    CHECK(contexts == std::set<std::size_t>{0, 2});
  }

  SECTION("a null response drops the null step") {
    auto backing = std::make_shared<InMemoryKeyValueStore>();
    TestFn body = [backing](TestContext& ctx) {
      wrap(backing, ctx)->get(Value("absent"));
    };
    ExplorationResult result = run_exploration("missing_key", body, config);

    REQUIRE(result.iterations.size() == 3);
    std::set<std::size_t> contexts;
    for (std::size_t i = 1; i < result.iterations.size(); ++i)
      contexts.insert(std::get<ByzantineFault>(
                          result.iterations[i].assignment.entries[0].fault)
                          .state.context);
    CHECK(contexts == std::set<std::size_t>{1, 2});
  }
}

TEST_CASE("async sites only expose corruptions their handles resolved") {
  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("k"), Value("ab"));

  SECTION("an unresolved handle leaves the site exception-only") {
    TestFn body = [backing](TestContext& ctx) {
      wrap(backing, ctx)->async_get(Value("k"));  // never resolved
    };
    ExplorationResult result =
        run_exploration("unresolved", body, ExplorationConfig{});
    REQUIRE(result.iterations.size() == 1);  // no catalogs, no corruption space
  }

  SECTION("a resolved handle corrupts the resolved value") {
    TestFn body = [backing](TestContext& ctx) {
      auto client = wrap(backing, ctx);
      DeferredHandle handle = client->async_get(Value("k"));
      resolve_deferred(handle);
    };
    ExplorationResult result =
        run_exploration("resolved", body, ExplorationConfig{});
    REQUIRE(result.iterations.size() == 3);  // baseline + 2 steps of "ab"
    for (std::size_t i = 1; i < 3; ++i) {
      CHECK(result.iterations[i].assignment.entries[0].method_fqn ==
            "KeyValueCommands/async_get");
    }
  }
}

TEST_CASE("catalog exceptions respect async capability at async sites") {
  interface_registry().register_interface(
      interface_traits<KeyValueCommands>::declaration());
  const FaultCatalog catalog = load_catalog_text(R"({
    "client_interface": "KeyValueCommands",
    "entries": [
      {"method": "KeyValueCommands/async_get",
       "exceptions": [
         {"name": "AsyncCapable", "message": "a", "async_capable": true},
         {"name": "SyncOnly", "message": "s", "async_capable": false}
       ]}
    ]
  })");

  auto backing = std::make_shared<InMemoryKeyValueStore>();
  backing->seed(Value("k"), Value("x"));
  TestFn body = [backing](TestContext& ctx) {
    auto client = wrap(backing, ctx);
    DeferredHandle handle = client->async_get(Value("k"));
    resolve_deferred(handle);
  };

  ExplorationConfig config;
  config.catalogs.add(catalog);
  ExplorationResult result = run_exploration("async_catalog", body, config);

  // baseline + 1 corruption of "x" + the async-capable exception only.
  REQUIRE(result.iterations.size() == 3);
  std::vector<std::string> exception_names;
  for (const auto& iteration : result.iterations)
    for (const auto& entry : iteration.assignment.entries)
      if (const auto* exc = std::get_if<ExceptionFault>(&entry.fault))
        exception_names.push_back(exc->exception_name);
  CHECK(exception_names == std::vector<std::string>{"AsyncCapable"});
}
