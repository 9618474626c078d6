#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faultline/call_site.hpp"
#include "faultline/fault.hpp"
#include "faultline/value.hpp"

namespace faultline {

enum class RecordKind { SyncCall, AsyncCall, DeferredResolution };

inline std::string_view to_string(RecordKind kind) {
  switch (kind) {
    case RecordKind::SyncCall: return "sync";
    case RecordKind::AsyncCall: return "async";
    case RecordKind::DeferredResolution: return "deferred_resolution";
  }
  return "unknown";
}

/// One intercepted interaction. Deferred resolutions are recorded as their
/// own rows (descriptor method "Future/get") carrying the fault, if any, of
/// the async call they resolve; `origin` links back to that call site.
struct InvocationRecord {
  RecordKind kind = RecordKind::SyncCall;
  CallSiteId site;
  CallDescriptor descriptor;
  Value response_value;
  std::string response_preview;
  std::optional<FaultSpec> fault;
  std::optional<CallSiteId> origin;
  std::size_t sequence = 0;  // append order within the iteration
};

struct ExecutionTrace {
  std::string test_block_digest;
  std::vector<InvocationRecord> records;

  const InvocationRecord* find(const CallSiteId& site) const {
    for (const auto& record : records)
      if (record.site == site) return &record;
    return nullptr;
  }

  bool contains_method(std::string_view method_fqn) const {
    for (const auto& record : records)
      if (record.descriptor.method_fqn == method_fqn) return true;
    return false;
  }

  std::size_t size() const { return records.size(); }
};

inline Value to_value(const InvocationRecord& record) {
  Value out = Value::object();
  out["kind"] = std::string(to_string(record.kind));
  out["site"] = record.site.value;
  out["rpc_method"] = record.descriptor.method_fqn;
  out["rpc_arguments"] = record.descriptor.args_preview;
  out["ordinal"] = record.descriptor.ordinal;
  out["rpc_response"] = record.response_preview;
  out["response_value"] = display_form(record.response_value);
  out["fault_injected"] =
      record.fault ? Value(fault_injected_text(*record.fault)) : Value(nullptr);
  out["fault"] = record.fault ? to_value(*record.fault) : Value(nullptr);
  out["origin"] = record.origin ? Value(record.origin->value) : Value(nullptr);
  return out;
}

}  // namespace faultline
