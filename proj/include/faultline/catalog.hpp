#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/interface_registry.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// One fabricatable exception declared by a catalog. Async-capable entries
/// are the only ones eligible at async call sites (an async call reports
/// failures through its handle, which not every client exception can do).
struct CatalogException {
  std::string name;
  std::optional<std::string> code;
  std::string message;
  std::optional<std::string> cause_message;
  bool async_capable = false;

  ExceptionFault to_fault() const {
    return ExceptionFault{name, code, message, cause_message};
  }
};

struct CatalogEntry {
  std::string method_fqn;
  std::vector<CatalogException> exceptions;
};

struct FaultCatalog {
  std::string client_interface;
  std::vector<CatalogEntry> entries;

  const CatalogEntry* find(std::string_view method_fqn) const {
    for (const auto& entry : entries)
      if (entry.method_fqn == method_fqn) return &entry;
    return nullptr;
  }
};

namespace detail {

inline const Value& require_field(const Value& object, const char* key,
                                  const char* where) {
  if (!object.is_object() || !object.contains(key))
    throw SchemaError(std::string("catalog ") + where + " is missing '" + key +
                      "'");
  return object.at(key);
}

inline std::string require_string(const Value& object, const char* key,
                                  const char* where) {
  const Value& v = require_field(object, key, where);
  if (!v.is_string())
    throw SchemaError(std::string("catalog ") + where + " field '" + key +
                      "' must be a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Validates and materializes a catalog document. The declared interface
/// must already be registered, and every method must exist on it.
inline FaultCatalog load_catalog(const Value& document,
                                 const InterfaceRegistry& registry =
                                     interface_registry()) {
  FaultCatalog catalog;
  catalog.client_interface =
      detail::require_string(document, "client_interface", "document");
  const InterfaceDecl* decl = registry.find(catalog.client_interface);
  if (!decl)
    throw UnknownInterfaceError("catalog declares unregistered interface '" +
                                catalog.client_interface + "'");

  const Value& entries = detail::require_field(document, "entries", "document");
  if (!entries.is_array())
    throw SchemaError("catalog 'entries' must be an array");

  for (const Value& entry_json : entries) {
    CatalogEntry entry;
    entry.method_fqn = detail::require_string(entry_json, "method", "entry");
    const auto slash = entry.method_fqn.find('/');
    if (slash == std::string::npos ||
        entry.method_fqn.substr(0, slash) != catalog.client_interface)
      throw SchemaError("catalog method '" + entry.method_fqn +
                        "' does not belong to interface '" +
                        catalog.client_interface + "'");
    if (!decl->find_method(entry.method_fqn.substr(slash + 1)))
      throw UnknownMethodError("catalog method '" + entry.method_fqn +
                               "' is not declared on interface '" +
                               catalog.client_interface + "'");

    const Value& exceptions =
        detail::require_field(entry_json, "exceptions", "entry");
    if (!exceptions.is_array())
      throw SchemaError("catalog entry 'exceptions' must be an array");
    for (const Value& exc_json : exceptions) {
      CatalogException exc;
      exc.name = detail::require_string(exc_json, "name", "exception");
      exc.message = detail::require_string(exc_json, "message", "exception");
      if (exc_json.contains("code") && !exc_json.at("code").is_null()) {
        if (!exc_json.at("code").is_string())
          throw SchemaError("catalog exception 'code' must be a string");
        exc.code = exc_json.at("code").get<std::string>();
      }
      if (exc_json.contains("cause_message") &&
          !exc_json.at("cause_message").is_null()) {
        if (!exc_json.at("cause_message").is_string())
          throw SchemaError("catalog exception 'cause_message' must be a string");
        exc.cause_message = exc_json.at("cause_message").get<std::string>();
      }
      if (exc_json.contains("async_capable")) {
        if (!exc_json.at("async_capable").is_boolean())
          throw SchemaError("catalog exception 'async_capable' must be a boolean");
        exc.async_capable = exc_json.at("async_capable").get<bool>();
      }
      entry.exceptions.push_back(std::move(exc));
    }
    catalog.entries.push_back(std::move(entry));
  }
  return catalog;
}

inline FaultCatalog load_catalog_text(std::string_view text,
                                      const InterfaceRegistry& registry =
                                          interface_registry()) {
  Value document;
  try {
    document = Value::parse(text);
  } catch (const std::exception& e) {
    throw SchemaError(std::string("catalog is not valid JSON: ") + e.what());
  }
  return load_catalog(document, registry);
}

inline FaultCatalog load_catalog_file(const std::string& path,
                                      const InterfaceRegistry& registry =
                                          interface_registry()) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open catalog file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_catalog_text(buffer.str(), registry);
  } catch (const SchemaError& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

/// Catalogs combined in load order; lookups merge matching entries from all.
class CatalogSet {
 public:
  CatalogSet() = default;
  explicit CatalogSet(std::vector<FaultCatalog> catalogs)
      : catalogs_(std::move(catalogs)) {}

  void add(FaultCatalog catalog) { catalogs_.push_back(std::move(catalog)); }

  bool empty() const { return catalogs_.empty(); }
  const std::vector<FaultCatalog>& catalogs() const { return catalogs_; }

  /// Exception faults eligible at the given method. At async sites only
  /// async-capable entries qualify.
  std::vector<ExceptionFault> faults_for(std::string_view method_fqn,
                                         bool async_site) const {
    std::vector<ExceptionFault> out;
    for (const auto& catalog : catalogs_) {
      const CatalogEntry* entry = catalog.find(method_fqn);
      if (!entry) continue;
      for (const auto& exc : entry->exceptions) {
        if (async_site && !exc.async_capable) continue;
        out.push_back(exc.to_fault());
      }
    }
    return out;
  }

 private:
  std::vector<FaultCatalog> catalogs_;
};

}  // namespace faultline
