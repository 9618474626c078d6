#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "faultline/call_site.hpp"
#include "faultline/deferred.hpp"
#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/interface_registry.hpp"
#include "faultline/session.hpp"
#include "faultline/trace.hpp"

namespace faultline {

/// Proxy core shared by all generated client wrappers. Resolves each call to
/// its call-site identity, consults the session's fault assignment, and
/// either forwards to the real client or injects the assigned fault. Faulted
/// calls never reach the wrapped client.
class Interceptor {
 public:
  explicit Interceptor(Session* session) : session_(session) {}

  Value invoke_sync(std::string_view method_fqn, const std::vector<Value>& args,
                    const std::function<Value()>& target) const {
    Session& session = require_session();
    auto [descriptor, site] = resolve(session, method_fqn, args);

    InvocationRecord record;
    record.kind = RecordKind::SyncCall;
    record.site = site;
    record.descriptor = descriptor;

    if (const AssignedFault* assigned = session.fault_for(site)) {
      session.note_fault_fired();
      record.fault = assigned->fault;
      if (const auto* exception = std::get_if<ExceptionFault>(&assigned->fault)) {
        record.response_value = Value(nullptr);
        record.response_preview = render_exception(*exception);
        session.record(std::move(record));
        throw FabricatedException(*exception);
      }
      Value corrupted = apply_byzantine(
          session.registry(), std::get<ByzantineFault>(assigned->fault));
      record.response_value = corrupted;
      record.response_preview = preview_value(corrupted);
      session.record(std::move(record));
      return corrupted;
    }

    Value response = target();
    record.response_value = response;
    record.response_preview = preview_value(response);
    session.record(std::move(record));
    return response;
  }

  DeferredHandle invoke_async(std::string_view method_fqn,
                              const std::vector<Value>& args,
                              const std::function<DeferredHandle()>& target) const {
    Session& session = require_session();
    auto [descriptor, site] = resolve(session, method_fqn, args);

    InvocationRecord record;
    record.kind = RecordKind::AsyncCall;
    record.site = site;
    record.descriptor = descriptor;
    record.response_value = Value(nullptr);
    record.response_preview = "<deferred>";

    auto stale = [token = session.iteration_token()] { return token.expired(); };

    if (const AssignedFault* assigned = session.fault_for(site)) {
      session.note_fault_fired();
      record.fault = assigned->fault;
      session.record(std::move(record));

      DeferredHandle::ProduceFn produce;
      if (const auto* exception = std::get_if<ExceptionFault>(&assigned->fault)) {
        ExceptionFault fault = *exception;
        produce = [fault]() -> Value { throw FabricatedException(fault); };
      } else {
        Value corrupted = apply_byzantine(
            session.registry(), std::get<ByzantineFault>(assigned->fault));
        produce = [corrupted] { return corrupted; };
      }
      return DeferredHandle::deferred(
          site, std::move(produce), resolution_recorder(site, assigned->fault),
          std::move(stale));
    }

    session.record(std::move(record));
    DeferredHandle inner = target();
    return DeferredHandle::deferred(
        site, [inner]() mutable { return inner.get(); },
        resolution_recorder(site, std::nullopt), std::move(stale));
  }

  Session& session() const { return *session_; }

 private:
  Session& require_session() const {
    if (!session_ || !session_->in_iteration())
      throw OutsideIterationError(
          "intercepted client called outside a test iteration");
    return *session_;
  }

  static std::pair<CallDescriptor, CallSiteId> resolve(
      Session& session, std::string_view method_fqn,
      const std::vector<Value>& args) {
    const std::string digest = digest_arguments(args);
    const std::size_t ordinal = session.next_ordinal(method_fqn, digest);
    CallDescriptor descriptor =
        make_descriptor(std::string(method_fqn), args, ordinal);
    CallSiteId site = resolve_call_site_id(descriptor);
    return {std::move(descriptor), std::move(site)};
  }

  /// Records the one DeferredResolution row for a handle at first-get time.
  /// Resolutions are ordered events of their own, so the ordinal is taken
  /// when the handle resolves, not when the async call was made.
  DeferredHandle::RecordFn resolution_recorder(
      CallSiteId origin, std::optional<FaultSpec> fault) const {
    Session* session = session_;
    return [session, origin = std::move(origin), fault = std::move(fault)](
               DeferredHandle::Status status, const Value& value) {
      if (!session->in_iteration()) return;
      static const std::vector<Value> no_args;
      const std::string digest = digest_arguments(no_args);
      const std::size_t ordinal = session->next_ordinal("Future/get", digest);
      InvocationRecord record;
      record.kind = RecordKind::DeferredResolution;
      record.descriptor = make_descriptor("Future/get", no_args, ordinal);
      record.site = resolve_call_site_id(record.descriptor);
      record.fault = fault;
      record.origin = origin;
      if (status == DeferredHandle::Status::Faulted) {
        record.response_value = Value(nullptr);
        const auto* exception =
            fault ? std::get_if<ExceptionFault>(&*fault) : nullptr;
        record.response_preview =
            exception ? render_exception(*exception) : "<faulted>";
      } else {
        record.response_value = value;
        record.response_preview = preview_value(value);
      }
      session->record(std::move(record));
    };
  }

  Session* session_;
};

/// Per-interface adapter: provides the interface declaration and a wrapper
/// factory producing the intercepting proxy. Client libraries specialize
/// this for each abstract client interface.
template <class Interface>
struct interface_traits;

/// Wraps a client so every call is routed through fault-injection
/// bookkeeping. The interface's declaration is (re-)registered so catalogs
/// can validate against it. The connection string identifies the backend the
/// target talks to; it plays no part in call-site identity.
template <class Interface>
std::shared_ptr<Interface> create_interceptor(std::shared_ptr<Interface> target,
                                              const std::string& connection_string,
                                              Session& session) {
  using traits = interface_traits<Interface>;
  interface_registry().register_interface(traits::declaration());
  (void)connection_string;
  return traits::wrap(std::move(target), Interceptor(&session));
}

}  // namespace faultline
