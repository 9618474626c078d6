#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "faultline/accumulator.hpp"
#include "faultline/call_site.hpp"
#include "faultline/transform.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// A client-specific exception to fabricate in place of a real call, as
/// declared by a fault catalog.
struct ExceptionFault {
  std::string exception_name;
  std::optional<std::string> code;
  std::string message;
  std::optional<std::string> cause_message;

  friend bool operator==(const ExceptionFault&,
                         const ExceptionFault&) = default;
};

/// One corruption step of a transformer space, self-contained: the stored
/// reference value and context are enough to recompute the corrupted value
/// without re-running the target, and the accumulator snapshot lets reports
/// render traversal progress without a registry.
struct ByzantineFault {
  std::string transformer_id;
  TransformerState state;
  Value accumulator;

  friend bool operator==(const ByzantineFault&, const ByzantineFault&) = default;
};

using FaultSpec = std::variant<ExceptionFault, ByzantineFault>;

/// Thrown by the interception layer when an exception fault fires. Derives
/// from std::runtime_error directly so tests observe it exactly as they
/// would a real client exception.
class FabricatedException : public std::runtime_error {
 public:
  explicit FabricatedException(ExceptionFault fault)
      : std::runtime_error(fault.message), fault_(std::move(fault)) {}

  const ExceptionFault& fault() const { return fault_; }
  const std::string& name() const { return fault_.exception_name; }

 private:
  ExceptionFault fault_;
};

/// Report rendering of a fabricated exception, one field per line, absent
/// fields shown as "undefined".
inline std::string render_exception(const ExceptionFault& fault) {
  std::string out = fault.exception_name;
  out += "\ncode = ";
  out += fault.code ? *fault.code : "undefined";
  out += "\ncause = " + fault.message;
  out += "\ncause_message = ";
  out += fault.cause_message ? *fault.cause_message : "undefined";
  out += "\ndescription = undefined";
  return out;
}

/// Recomputes the corrupted value a Byzantine fault injects. Dispatches on
/// the recorded transformer id so replay works for whole-document traversal
/// and cache misses as well as scalar transformers.
inline Value apply_byzantine(const TransformerRegistry& registry,
                             const ByzantineFault& fault) {
  const Value& reference = fault.state.reference_value;
  const std::size_t context = fault.state.context;
  if (fault.transformer_id == "structured-document")
    return document_apply(registry, reference, context);
  if (fault.transformer_id == "cache_miss")
    return CacheMissTransformer{}.apply(reference, context);
  const Transformer* transformer = registry.transformer_for(type_of(reference));
  if (!transformer)
    throw ExhaustedError("no transformer for byzantine fault replay");
  return checked_apply(*transformer,
                       registry.is_user_registered(type_of(reference)),
                       reference, context);
}

/// Stable identity of a fault for deduplicating explored assignments.
inline std::string fault_identity(const FaultSpec& fault) {
  if (const auto* e = std::get_if<ExceptionFault>(&fault)) {
    std::string id = "exception:" + e->exception_name;
    id += ":" + (e->code ? *e->code : std::string("~"));
    id += ":" + e->message;
    id += ":" + (e->cause_message ? *e->cause_message : std::string("~"));
    return id;
  }
  const auto& b = std::get<ByzantineFault>(fault);
  return "byzantine:" + b.transformer_id + ":" +
         canonical_json(b.state.reference_value) + ":" +
         std::to_string(b.state.context);
}

struct AssignedFault {
  CallSiteId site;
  std::string method_fqn;
  FaultSpec fault;
};

/// The set of faults injected during one test iteration, keyed by call site.
struct FaultAssignment {
  std::vector<AssignedFault> entries;

  const AssignedFault* find(const CallSiteId& site) const {
    for (const auto& entry : entries)
      if (entry.site == site) return &entry;
    return nullptr;
  }

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
};

/// Canonical signature of an assignment (order-independent), used to avoid
/// re-exploring an already-visited fault combination.
inline std::string assignment_signature(const FaultAssignment& assignment) {
  std::vector<std::string> parts;
  parts.reserve(assignment.entries.size());
  for (const auto& entry : assignment.entries)
    parts.push_back(entry.site.value + "|" + fault_identity(entry.fault));
  std::sort(parts.begin(), parts.end());
  std::string out;
  for (const auto& part : parts) {
    if (!out.empty()) out.push_back('\n');
    out += part;
  }
  return out;
}

inline Value to_value(const ExceptionFault& fault) {
  Value out = Value::object();
  out["kind"] = "exception";
  out["name"] = fault.exception_name;
  out["code"] = fault.code ? Value(*fault.code) : Value(nullptr);
  out["message"] = fault.message;
  out["cause_message"] =
      fault.cause_message ? Value(*fault.cause_message) : Value(nullptr);
  return out;
}

inline Value to_value(const ByzantineFault& fault) {
  Value out = Value::object();
  out["kind"] = "byzantine";
  out["transformer"] = fault.transformer_id;
  out["referenceValue"] = display_form(fault.state.reference_value);
  out["context"] = fault.state.context;
  out["accumulator"] = display_form(fault.accumulator);
  return out;
}

inline Value to_value(const FaultSpec& fault) {
  if (const auto* e = std::get_if<ExceptionFault>(&fault)) return to_value(*e);
  return to_value(std::get<ByzantineFault>(fault));
}

/// The report's "Fault Injected?" cell: the exception rendering for
/// exception faults, the serialized accumulator document for Byzantine ones.
inline std::string fault_injected_text(const FaultSpec& fault) {
  if (const auto* e = std::get_if<ExceptionFault>(&fault))
    return render_exception(*e);
  const auto& byzantine = std::get<ByzantineFault>(fault);
  return display_form(byzantine.accumulator).dump();
}

}  // namespace faultline
