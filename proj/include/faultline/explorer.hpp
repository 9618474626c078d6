#pragma once

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "faultline/accumulator.hpp"
#include "faultline/catalog.hpp"
#include "faultline/digest.hpp"
#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/session.hpp"
#include "faultline/trace.hpp"
#include "faultline/transform.hpp"

namespace faultline {

struct ExplorationConfig {
  std::size_t max_combination_size = 2;
  std::size_t byte_flip_cap = 64;
  bool enable_cache_miss = false;
  std::size_t max_iterations = 10000;
  bool abort_on_first_failure = false;
  std::vector<std::string> catalog_paths;
  CatalogSet catalogs;
  TransformerRegistry registry;
  // Test-only: shuffles the initial single/combination blocks to check that
  // exploration results do not depend on frontier order.
  bool shuffle_frontier = false;
  unsigned shuffle_seed = 0;
};

enum class TestStatus { Passed, Failed, Errored };

inline std::string_view to_string(TestStatus status) {
  switch (status) {
    case TestStatus::Passed: return "passed";
    case TestStatus::Failed: return "failed";
    case TestStatus::Errored: return "errored";
  }
  return "unknown";
}

struct IterationOutcome {
  std::size_t index = 0;  // 0 is the fault-free baseline
  FaultAssignment assignment;
  ExecutionTrace trace;
  TestStatus status = TestStatus::Passed;
  std::string message;
};

struct ExplorationResult {
  std::string test_name;
  std::string test_block_digest;  // digest of the test identity
  Value config_snapshot;
  std::vector<IterationOutcome> iterations;
  bool truncated = false;
  std::vector<std::string> warnings;

  std::size_t count(TestStatus status) const {
    std::size_t n = 0;
    for (const auto& it : iterations)
      if (it.status == status) ++n;
    return n;
  }
};

using TestFn = std::function<void(TestContext&)>;

/// FIFO of fault assignments still to run, deduplicated by canonical
/// signature across everything ever enqueued.
class Frontier {
 public:
  bool push(FaultAssignment assignment) {
    if (!visited_.insert(assignment_signature(assignment)).second)
      return false;
    queue_.push_back(std::move(assignment));
    return true;
  }

  FaultAssignment pop() {
    FaultAssignment front = std::move(queue_.front());
    queue_.pop_front();
    return front;
  }

  bool empty() const { return queue_.empty(); }
  std::size_t size() const { return queue_.size(); }
  bool seen(const FaultAssignment& assignment) const {
    return visited_.count(assignment_signature(assignment)) > 0;
  }

  /// Marks an assignment as already explored without enqueuing it.
  void mark_seen(const FaultAssignment& assignment) {
    visited_.insert(assignment_signature(assignment));
  }

 private:
  std::deque<FaultAssignment> queue_;
  std::set<std::string> visited_;
};

/// All single faults available at one call site, in enumeration order:
/// corruption steps first, then cache misses when enabled, then catalog
/// exceptions.
struct SiteFaults {
  CallSiteId site;
  std::string method_fqn;
  std::vector<FaultSpec> faults;
};

namespace detail {

/// The reference value corruptions start from. Sync calls corrupt their
/// response; async calls corrupt the value their handle resolved to, so an
/// async call whose handle was never resolved exposes no corruption space.
inline const Value* reference_value_for(const ExecutionTrace& trace,
                                        const InvocationRecord& record) {
  if (record.kind == RecordKind::SyncCall) return &record.response_value;
  if (record.kind != RecordKind::AsyncCall) return nullptr;
  for (const auto& other : trace.records) {
    if (other.kind == RecordKind::DeferredResolution && other.origin &&
        *other.origin == record.site)
      return &other.response_value;
  }
  return nullptr;
}

inline std::vector<SiteFaults> enumerate_site_faults(
    const ExecutionTrace& trace, const TransformerRegistry& registry,
    const CatalogSet& catalogs, bool enable_cache_miss,
    std::vector<std::string>* warnings,
    const std::set<std::string>* only_methods = nullptr) {
  std::vector<SiteFaults> out;
  for (const auto& record : trace.records) {
    if (record.kind == RecordKind::DeferredResolution) continue;
    if (record.fault) continue;  // already faulted by the running assignment
    if (only_methods && !only_methods->count(record.descriptor.method_fqn))
      continue;

    SiteFaults site;
    site.site = record.site;
    site.method_fqn = record.descriptor.method_fqn;

    if (const Value* reference = reference_value_for(trace, record)) {
      const std::size_t space = byzantine_space(registry, *reference, warnings);
      const std::string id = byzantine_transformer_id(registry, *reference);
      for (std::size_t step = 0; step < space; ++step) {
        ByzantineFault fault;
        fault.transformer_id = id;
        fault.state =
            TransformerState{*reference, step, step + 1 >= space};
        fault.accumulator = byzantine_accumulator(registry, *reference, step);
        site.faults.push_back(std::move(fault));
      }
      if (enable_cache_miss) {
        const Transformer& cm = registry.cache_miss_transformer();
        const std::size_t cm_space = cm.space_size(*reference);
        for (std::size_t step = 0; step < cm_space; ++step) {
          // A step whose substitute equals the real response would be a
          // no-op iteration; drop it here so the state sequence stays intact.
          if (cm.apply(*reference, step) == *reference) continue;
          ByzantineFault fault;
          fault.transformer_id = cm.name();
          fault.state =
              TransformerState{*reference, step, step + 1 >= cm_space};
          fault.accumulator = scalar_accumulator(cm, *reference, step);
          site.faults.push_back(std::move(fault));
        }
      }
    }

    for (auto& exception : catalogs.faults_for(
             record.descriptor.method_fqn, record.kind == RecordKind::AsyncCall))
      site.faults.push_back(std::move(exception));

    if (!site.faults.empty()) out.push_back(std::move(site));
  }
  return out;
}

inline FaultAssignment single_assignment(const SiteFaults& site,
                                         const FaultSpec& fault) {
  FaultAssignment assignment;
  assignment.entries.push_back(AssignedFault{site.site, site.method_fqn, fault});
  return assignment;
}

/// Cross-product assignments for every k-subset of sites, subsets in
/// ascending site order, products with the rightmost site varying fastest.
inline void append_combinations(const std::vector<SiteFaults>& sites,
                                std::size_t k,
                                std::vector<FaultAssignment>& out) {
  std::vector<std::size_t> chosen;
  const std::function<void(std::size_t)> choose = [&](std::size_t start) {
    if (chosen.size() == k) {
      std::vector<std::size_t> odometer(k, 0);
      while (true) {
        FaultAssignment assignment;
        for (std::size_t i = 0; i < k; ++i) {
          const SiteFaults& site = sites[chosen[i]];
          assignment.entries.push_back(AssignedFault{
              site.site, site.method_fqn, site.faults[odometer[i]]});
        }
        out.push_back(std::move(assignment));
        std::size_t pos = k;
        while (pos > 0) {
          --pos;
          if (++odometer[pos] < sites[chosen[pos]].faults.size()) break;
          odometer[pos] = 0;
          if (pos == 0) return;
        }
      }
    }
    for (std::size_t i = start; i < sites.size(); ++i) {
      chosen.push_back(i);
      choose(i + 1);
      chosen.pop_back();
    }
  };
  choose(0);
}

struct TestRun {
  TestStatus status = TestStatus::Passed;
  std::string message;
};

inline TestRun run_test_body(const TestFn& test, TestContext& context) {
  try {
    test(context);
    return {TestStatus::Passed, ""};
  } catch (const AssertionFailure& e) {
    return {TestStatus::Failed, e.what()};
  } catch (const std::exception& e) {
    return {TestStatus::Errored, e.what()};
  } catch (...) {
    return {TestStatus::Errored, "unknown error"};
  }
}

inline Value config_snapshot(const ExplorationConfig& config) {
  Value out = Value::object();
  out["max_combination_size"] = config.max_combination_size;
  out["byte_flip_cap"] = config.byte_flip_cap;
  out["enable_cache_miss"] = config.enable_cache_miss;
  out["max_iterations"] = config.max_iterations;
  out["abort_on_first_failure"] = config.abort_on_first_failure;
  out["catalog_paths"] = config.catalog_paths;
  return out;
}

}  // namespace detail

/// Runs the full exploration: a fault-free baseline, every single fault over
/// the baseline's call sites, cross-site combinations up to the configured
/// size, and adaptively discovered faults for call paths that only appear
/// under injection. Throws BaselineFailedError when the unfaulted run does
/// not pass.
inline ExplorationResult run_exploration(const std::string& test_name,
                                         const TestFn& test,
                                         ExplorationConfig config) {
  config.registry.set_byte_flip_cap(config.byte_flip_cap);
  for (const auto& path : config.catalog_paths)
    config.catalogs.add(load_catalog_file(path));

  ExplorationResult result;
  result.test_name = test_name;
  result.test_block_digest = sha1_hex(test_name);
  result.config_snapshot = detail::config_snapshot(config);

  Session session(&config.registry);
  TestContext context(&session);

  auto run_iteration = [&](FaultAssignment assignment) -> IterationOutcome {
    IterationOutcome outcome;
    outcome.index = result.iterations.size();
    outcome.assignment = assignment;
    session.begin_iteration(std::move(assignment));
    const detail::TestRun run = detail::run_test_body(test, context);
    outcome.trace = session.end_iteration();
    outcome.trace.test_block_digest = result.test_block_digest;
    outcome.status = run.status;
    outcome.message = run.message;
    return outcome;
  };

  result.iterations.push_back(run_iteration(FaultAssignment{}));
  const IterationOutcome& baseline = result.iterations.front();
  if (baseline.status != TestStatus::Passed)
    throw BaselineFailedError("baseline iteration " +
                              std::string(to_string(baseline.status)) +
                              (baseline.message.empty()
                                   ? std::string()
                                   : ": " + baseline.message));

  // Baseline responses by site, for nondeterminism detection. Resolution
  // rows are keyed by the async site they resolve, not by their own identity
  // ("Future/get" with no arguments matches across unrelated calls): when an
  // upstream fault changes an async call's arguments, the call gets a fresh
  // site id, drops out of this map, and its drifted resolution is correctly
  // not flagged.
  const auto response_key =
      [](const InvocationRecord& record) -> std::optional<std::string> {
    if (record.kind == RecordKind::DeferredResolution) {
      if (!record.origin) return std::nullopt;
      return "resolution:" + record.origin->value;
    }
    return record.site.value;
  };
  std::map<std::string, std::string> baseline_responses;
  for (const auto& record : baseline.trace.records)
    if (const auto key = response_key(record))
      baseline_responses[*key] = canonical_json(record.response_value);

  std::set<std::string> seen_methods;
  for (const auto& record : baseline.trace.records)
    seen_methods.insert(record.descriptor.method_fqn);

  const std::vector<SiteFaults> baseline_sites = detail::enumerate_site_faults(
      baseline.trace, config.registry, config.catalogs,
      config.enable_cache_miss, &result.warnings);

  Frontier frontier;
  frontier.mark_seen(FaultAssignment{});  // baseline already ran

  std::mt19937 shuffle_rng(config.shuffle_seed);
  auto push_block = [&](std::vector<FaultAssignment> block) {
    if (config.shuffle_frontier)
      std::shuffle(block.begin(), block.end(), shuffle_rng);
    for (auto& assignment : block) frontier.push(std::move(assignment));
  };

  {
    std::vector<FaultAssignment> singles;
    for (const auto& site : baseline_sites)
      for (const auto& fault : site.faults)
        singles.push_back(detail::single_assignment(site, fault));
    push_block(std::move(singles));

    std::vector<FaultAssignment> combos;
    for (std::size_t k = 2; k <= config.max_combination_size; ++k)
      detail::append_combinations(baseline_sites, k, combos);
    push_block(std::move(combos));
  }

  std::set<std::string> nondeterminism_warned;
  bool budget_exhausted = false;

  while (!frontier.empty()) {
    if (result.iterations.size() >= config.max_iterations) {
      budget_exhausted = true;
      break;
    }
    result.iterations.push_back(run_iteration(frontier.pop()));
    const IterationOutcome& outcome = result.iterations.back();

    // A fault can steer the test down a code path the baseline never took.
    // Calls to methods never seen before reveal new fault space: enqueue
    // their single faults, alone and (within the size budget) merged with
    // the assignment that revealed them.
    std::set<std::string> new_methods;
    for (const auto& record : outcome.trace.records)
      if (!seen_methods.count(record.descriptor.method_fqn))
        new_methods.insert(record.descriptor.method_fqn);
    if (!new_methods.empty()) {
      const auto discovered = detail::enumerate_site_faults(
          outcome.trace, config.registry, config.catalogs,
          config.enable_cache_miss, &result.warnings, &new_methods);
      for (const auto& site : discovered) {
        for (const auto& fault : site.faults) {
          frontier.push(detail::single_assignment(site, fault));
          if (outcome.assignment.size() + 1 <= config.max_combination_size) {
            FaultAssignment merged = outcome.assignment;
            merged.entries.push_back(
                AssignedFault{site.site, site.method_fqn, fault});
            frontier.push(std::move(merged));
          }
        }
      }
      seen_methods.insert(new_methods.begin(), new_methods.end());
    }

    // An unfaulted site answering differently than in the baseline means
    // the test or client is nondeterministic; results may not reproduce.
    for (const auto& record : outcome.trace.records) {
      if (record.fault) continue;
      const auto key = response_key(record);
      if (!key) continue;
      auto it = baseline_responses.find(*key);
      if (it == baseline_responses.end()) continue;
      if (it->second == canonical_json(record.response_value)) continue;
      if (!nondeterminism_warned.insert(*key).second) continue;
      result.warnings.push_back(
          "nondeterministic response at " + record.descriptor.method_fqn +
          " (ordinal " + std::to_string(record.descriptor.ordinal) +
          "): unfaulted response differs from the baseline");
    }

    if (config.abort_on_first_failure && outcome.status != TestStatus::Passed)
      break;
  }

  if (budget_exhausted) {
    result.truncated = true;
    result.warnings.push_back(
        "exploration truncated at max_iterations=" +
        std::to_string(config.max_iterations) + " with " +
        std::to_string(frontier.size()) + " assignments unexplored");
  }

  return result;
}

}  // namespace faultline
