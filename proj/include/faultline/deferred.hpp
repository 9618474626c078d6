#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>

#include "faultline/call_site.hpp"
#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// Handle returned by async client methods. The value (or fabricated
/// exception) materializes on the first `get()`; later calls repeat the same
/// outcome without re-recording anything. Handles go stale when the test
/// iteration they were created in ends.
class DeferredHandle {
 public:
  enum class Status { Pending, Resolved, Faulted };

  using ProduceFn = std::function<Value()>;
  using RecordFn = std::function<void(Status, const Value&)>;
  using StaleFn = std::function<bool()>;

  DeferredHandle() : state_(std::make_shared<State>()) {}

  /// Immediately-resolved handle; used by real client implementations whose
  /// async calls complete synchronously.
  static DeferredHandle resolved(Value value) {
    DeferredHandle handle;
    handle.state_->value = std::move(value);
    handle.state_->status = Status::Resolved;
    handle.state_->materialized = true;
    return handle;
  }

  /// Lazily-materialized handle. `produce` runs once on first get (it may
  /// throw a FabricatedException for exception faults); `record` then logs
  /// the resolution exactly once; `stale` gates use across iterations.
  static DeferredHandle deferred(CallSiteId origin, ProduceFn produce,
                                 RecordFn record, StaleFn stale) {
    DeferredHandle handle;
    handle.state_->origin = std::move(origin);
    handle.state_->produce = std::move(produce);
    handle.state_->record = std::move(record);
    handle.state_->stale = std::move(stale);
    return handle;
  }

  Value get() {
    State& s = *state_;
    if (s.stale && s.stale())
      throw StaleHandleError(
          "deferred handle resolved after its test iteration ended");
    if (!s.materialized) {
      s.materialized = true;
      try {
        if (s.produce) s.value = s.produce();
        s.status = Status::Resolved;
      } catch (const FabricatedException& e) {
        s.exception = e.fault();
        s.status = Status::Faulted;
      }
      if (s.record) s.record(s.status, s.value);
    }
    if (s.exception) throw FabricatedException(*s.exception);
    return s.value;
  }

  Status status() const { return state_->status; }

  /// Call site of the async invocation that produced this handle (empty for
  /// handles created outside interception).
  const CallSiteId& site() const { return state_->origin; }

 private:
  struct State {
    Status status = Status::Pending;
    bool materialized = false;
    CallSiteId origin;
    Value value;
    std::optional<ExceptionFault> exception;
    ProduceFn produce;
    RecordFn record;
    StaleFn stale;
  };

  std::shared_ptr<State> state_;
};

/// Resolves a deferred handle: the underlying value, or the fault assigned
/// to the originating call.
inline Value resolve_deferred(DeferredHandle& handle) { return handle.get(); }

}  // namespace faultline
