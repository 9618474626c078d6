#pragma once

#include <chrono>
#include <cstdio>
#include <ctime>
#include <string>
#include <variant>

#include "faultline/explorer.hpp"
#include "faultline/fault.hpp"
#include "faultline/trace.hpp"

namespace faultline {

/// How a trace row is highlighted in reports. Unfaulted rows (including the
/// whole baseline) carry no highlight; resolution rows of a faulted async
/// call get their own category so readers can tell injection point from
/// observation point.
enum class FaultCategory { None, Byzantine, Exception, DeferredResolution };

inline std::string_view to_string(FaultCategory category) {
  switch (category) {
    case FaultCategory::None: return "none";
    case FaultCategory::Byzantine: return "byzantine";
    case FaultCategory::Exception: return "exception";
    case FaultCategory::DeferredResolution: return "deferred_resolution";
  }
  return "unknown";
}

inline FaultCategory category_of(const InvocationRecord& record) {
  if (!record.fault) return FaultCategory::None;
  if (record.kind == RecordKind::DeferredResolution)
    return FaultCategory::DeferredResolution;
  return std::holds_alternative<ByzantineFault>(*record.fault)
             ? FaultCategory::Byzantine
             : FaultCategory::Exception;
}

inline constexpr const char* kByzantineColor = "#F5A623";
inline constexpr const char* kExceptionColor = "#D0021B";
inline constexpr const char* kDeferredResolutionColor = "rgba(248,231,28,0.4)";

/// Whether the assigned fault actually fired during the iteration. A fault
/// can go unreached when another fault in the same assignment steers the
/// test away from the site (or changes its arguments, and with them its
/// identity).
inline bool fault_reached(const AssignedFault& entry,
                          const ExecutionTrace& trace) {
  for (const auto& record : trace.records)
    if (record.site == entry.site && record.fault) return true;
  return false;
}

inline std::string current_utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
#if defined(_WIN32)
  gmtime_s(&utc, &now);
#else
  gmtime_r(&now, &utc);
#endif
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour,
                utc.tm_min, utc.tm_sec);
  return buffer;
}

}  // namespace faultline
