#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <utility>

#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/trace.hpp"
#include "faultline/transform.hpp"

namespace faultline {

/// Per-exploration bookkeeping shared by all interceptors: the active fault
/// assignment, the trace being recorded, and the per-iteration ordinal
/// counters that make repeated identical calls distinguishable.
class Session {
 public:
  explicit Session(const TransformerRegistry* registry)
      : registry_(registry) {}

  void begin_iteration(FaultAssignment assignment) {
    if (in_iteration_)
      throw OutsideIterationError("previous iteration was not ended");
    assignment_ = std::move(assignment);
    trace_ = ExecutionTrace{};
    ordinals_.clear();
    next_sequence_ = 0;
    fault_fired_ = false;
    in_iteration_ = true;
    ++iteration_index_;
    token_ = std::make_shared<std::size_t>(iteration_index_);
  }

  ExecutionTrace end_iteration() {
    if (!in_iteration_)
      throw OutsideIterationError("no iteration in progress");
    in_iteration_ = false;
    token_.reset();  // invalidates deferred handles from this iteration
    return std::move(trace_);
  }

  bool in_iteration() const { return in_iteration_; }
  std::size_t iteration_index() const { return iteration_index_; }

  /// 0-based count of prior calls with the same method and argument digest
  /// in this iteration.
  std::size_t next_ordinal(std::string_view method_fqn,
                           std::string_view args_digest) {
    std::lock_guard<std::mutex> lock(mutex_);
    std::string key = std::string(method_fqn) + "\n" + std::string(args_digest);
    return ordinals_[key]++;
  }

  const AssignedFault* fault_for(const CallSiteId& site) const {
    return assignment_.find(site);
  }

  const FaultAssignment& assignment() const { return assignment_; }

  /// Appends are serialized so tests may issue client calls from helper
  /// threads; trace order is the order appends won the lock.
  void record(InvocationRecord record) {
    std::lock_guard<std::mutex> lock(mutex_);
    record.sequence = next_sequence_++;
    trace_.records.push_back(std::move(record));
  }

  const ExecutionTrace& trace() const { return trace_; }

  void note_fault_fired() {
    std::lock_guard<std::mutex> lock(mutex_);
    fault_fired_ = true;
  }

  /// True when this iteration runs with at least one fault assigned.
  bool fault_injection_active() const { return !assignment_.empty(); }

  /// True once a faulted call has actually executed this iteration.
  bool fault_fired() const { return fault_fired_; }

  const TransformerRegistry& registry() const { return *registry_; }

  /// Expires at iteration end; deferred handles hold a weak reference to
  /// detect use across iterations.
  std::weak_ptr<const std::size_t> iteration_token() const { return token_; }

 private:
  const TransformerRegistry* registry_;
  FaultAssignment assignment_;
  ExecutionTrace trace_;
  std::map<std::string, std::size_t> ordinals_;
  std::shared_ptr<const std::size_t> token_;
  std::mutex mutex_;
  std::size_t next_sequence_ = 0;
  bool in_iteration_ = false;
  bool fault_fired_ = false;
  std::size_t iteration_index_ = 0;
};

/// Handed to the test body; lets resilient tests adapt their assertions to
/// fault-injected iterations.
class TestContext {
 public:
  explicit TestContext(Session* session) : session_(session) {}

  /// Any fault assigned to the current iteration (false on the baseline).
  /// Only meaningful inside an iteration.
  bool was_fault_injected() const {
    require_iteration();
    return session_->fault_injection_active();
  }

  /// A fault assigned to some call site of the given method in the current
  /// iteration. Only meaningful inside an iteration.
  bool was_fault_injected_on(std::string_view method_fqn) const {
    require_iteration();
    for (const auto& entry : session_->assignment().entries)
      if (entry.method_fqn == method_fqn) return true;
    return false;
  }

  /// A faulted call has executed so far in this iteration.
  bool fault_fired() const {
    require_iteration();
    return session_->fault_fired();
  }

  Session& session() const { return *session_; }

 private:
  void require_iteration() const {
    if (!session_ || !session_->in_iteration())
      throw OutsideIterationError(
          "test context queried outside an active iteration");
  }

  Session* session_;
};

}  // namespace faultline
