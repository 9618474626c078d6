#pragma once

#include <string_view>

#include "faultline/catalog.hpp"
#include "faultline/fixtures/document_client.hpp"
#include "faultline/fixtures/kv_client.hpp"
#include "faultline/fixtures/sql_client.hpp"
#include "faultline/interceptor.hpp"
#include "faultline/interface_registry.hpp"

namespace faultline::fixtures {

/// Compiled-in copies of the catalog files shipped under catalogs/, so the
/// bundled scenarios run without knowing where the repository lives. The
/// texts must stay byte-identical to those files; a test enforces it.
inline constexpr std::string_view kv_client_catalog_text = R"json({
  "client_interface": "KeyValueCommands",
  "entries": [
    {
      "method": "KeyValueCommands/get",
      "exceptions": [
        {
          "name": "RedisCommandTimeoutException",
          "message": "Command timed out after 100 millisecond(s)",
          "async_capable": true
        }
      ]
    },
    {
      "method": "KeyValueCommands/async_get",
      "exceptions": [
        {
          "name": "RedisCommandTimeoutException",
          "message": "Command timed out after 100 millisecond(s)",
          "async_capable": true
        }
      ]
    }
  ]
}
)json";

inline constexpr std::string_view doc_client_catalog_text = R"json({
  "client_interface": "DocumentCommands",
  "entries": [
    {
      "method": "DocumentCommands/fetch",
      "exceptions": [
        {
          "name": "DocumentStoreTimeoutException",
          "message": "Request timed out after 250 millisecond(s)",
          "async_capable": true
        },
        {
          "name": "DocumentStoreUnavailableException",
          "code": "SERVICE_UNAVAILABLE",
          "message": "Service is unavailable. Retry the request.",
          "cause_message": "Connection refused",
          "async_capable": false
        }
      ]
    },
    {
      "method": "DocumentCommands/async_fetch",
      "exceptions": [
        {
          "name": "DocumentStoreTimeoutException",
          "message": "Request timed out after 250 millisecond(s)",
          "async_capable": true
        }
      ]
    }
  ]
}
)json";

inline constexpr std::string_view sql_client_catalog_text = R"json({
  "client_interface": "SqlCommands",
  "entries": [
    {
      "method": "SqlCommands/execute",
      "exceptions": [
        {
          "name": "SqlTransientConnectionException",
          "code": "08006",
          "message": "Connection failure during statement execution",
          "cause_message": "Broken pipe",
          "async_capable": false
        },
        {
          "name": "SqlTimeoutException",
          "code": "57014",
          "message": "Query cancelled due to statement timeout",
          "async_capable": false
        }
      ]
    }
  ]
}
)json";

inline void register_fixture_interfaces() {
  interface_registry().register_interface(
      interface_traits<KeyValueCommands>::declaration());
  interface_registry().register_interface(
      interface_traits<DocumentCommands>::declaration());
  interface_registry().register_interface(
      interface_traits<SqlCommands>::declaration());
}

inline FaultCatalog kv_client_catalog() {
  register_fixture_interfaces();
  return load_catalog_text(kv_client_catalog_text);
}

inline FaultCatalog doc_client_catalog() {
  register_fixture_interfaces();
  return load_catalog_text(doc_client_catalog_text);
}

inline FaultCatalog sql_client_catalog() {
  register_fixture_interfaces();
  return load_catalog_text(sql_client_catalog_text);
}

}  // namespace faultline::fixtures
