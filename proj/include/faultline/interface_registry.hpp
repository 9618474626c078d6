#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "faultline/errors.hpp"

namespace faultline {

enum class MethodKind { Sync, Async };

struct MethodInfo {
  std::string name;
  MethodKind kind = MethodKind::Sync;
};

/// Method metadata for one client interface. The facade factory relies on
/// this to tell sync from async methods, and catalogs validate their method
/// names against it.
struct InterfaceDecl {
  std::string name;
  std::vector<MethodInfo> methods;

  const MethodInfo* find_method(std::string_view method_name) const {
    for (const auto& m : methods)
      if (m.name == method_name) return &m;
    return nullptr;
  }
};

class InterfaceRegistry {
 public:
  void register_interface(InterfaceDecl decl) {
    std::lock_guard lock(mutex_);
    interfaces_[decl.name] = std::move(decl);
  }

  const InterfaceDecl* find(std::string_view interface_name) const {
    std::lock_guard lock(mutex_);
    auto it = interfaces_.find(std::string(interface_name));
    return it == interfaces_.end() ? nullptr : &it->second;
  }

  /// Resolves "Interface/method". Returns nothing if either part is unknown.
  std::optional<MethodInfo> find_method(std::string_view method_fqn) const {
    const auto slash = method_fqn.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    const auto* decl = find(method_fqn.substr(0, slash));
    if (!decl) return std::nullopt;
    const auto* m = decl->find_method(method_fqn.substr(slash + 1));
    if (!m) return std::nullopt;
    return *m;
  }

 private:
  mutable std::mutex mutex_;
  std::map<std::string, InterfaceDecl> interfaces_;
};

/// Process-wide registry; client adapters register their interfaces once at
/// wiring time.
inline InterfaceRegistry& interface_registry() {
  static InterfaceRegistry registry;
  return registry;
}

inline bool is_async_method(std::string_view method_fqn) {
  const auto info = interface_registry().find_method(method_fqn);
  return info && info->kind == MethodKind::Async;
}

}  // namespace faultline
