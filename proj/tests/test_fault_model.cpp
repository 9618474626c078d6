#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <set>
#include <string>

#include "faultline/catalog.hpp"
#include "faultline/errors.hpp"
#include "faultline/fault.hpp"
#include "faultline/value.hpp"

using namespace faultline;

namespace {

const InterfaceRegistry& cache_registry() {
  static InterfaceRegistry registry;
  static const bool initialized = [] {
    registry.register_interface(InterfaceDecl{
        "CacheCommands",
        {{"get", MethodKind::Sync}, {"async_get", MethodKind::Async}}});
    return true;
  }();
  (void)initialized;
  return registry;
}

Value minimal_catalog() {
  return Value::parse(R"json({
    "client_interface": "CacheCommands",
    "entries": [
      {"method": "CacheCommands/get",
       "exceptions": [
         {"name": "CacheTimeoutException",
          "message": "Command timed out after 100 millisecond(s)",
          "async_capable": true},
         {"name": "CacheUnavailableException",
          "code": "UNAVAILABLE",
          "message": "Service is unavailable. Retry the request.",
          "cause_message": "Connection refused"}
       ]}
    ]
  })json");
}

}  // namespace

TEST_CASE("fabricated exceptions impersonate client exceptions") {
  const ExceptionFault timeout{"RedisCommandTimeoutException", std::nullopt,
                               "Command timed out after 100 millisecond(s)",
                               std::nullopt};
  FabricatedException thrown(timeout);
  CHECK(std::string(thrown.what()) ==
        "Command timed out after 100 millisecond(s)");
  CHECK(thrown.name() == "RedisCommandTimeoutException");
  CHECK(thrown.fault() == timeout);
  // Framework errors are a separate hierarchy.
  CHECK(dynamic_cast<const Error*>(
            static_cast<const std::exception*>(&thrown)) == nullptr);
}

TEST_CASE("exception rendering prints one field per line") {
  SECTION("absent fields render as undefined") {
    const ExceptionFault fault{"RedisCommandTimeoutException", std::nullopt,
                               "Command timed out after 100 millisecond(s)",
                               std::nullopt};
    CHECK(render_exception(fault) ==
          "RedisCommandTimeoutException\n"
          "code = undefined\n"
          "cause = Command timed out after 100 millisecond(s)\n"
          "cause_message = undefined\n"
          "description = undefined");
  }
  SECTION("present fields render verbatim") {
    const ExceptionFault fault{"SqlTransientConnectionException", "08006",
                               "Connection failure during statement execution",
                               "Broken pipe"};
    CHECK(render_exception(fault) ==
          "SqlTransientConnectionException\n"
          "code = 08006\n"
          "cause = Connection failure during statement execution\n"
          "cause_message = Broken pipe\n"
          "description = undefined");
  }
}

TEST_CASE("byzantine replay recomputes the corrupted value") {
  TransformerRegistry registry;

  SECTION("scalar transformers dispatch on the reference kind") {
    ByzantineFault fault{"string", {Value("abc"), 1, false}, Value::object()};
    CHECK(apply_byzantine(registry, fault) == Value("acc"));
    ByzantineFault negate{"boolean", {Value(true), 0, false}, Value::object()};
    CHECK(apply_byzantine(registry, negate) == Value(false));
    ByzantineFault flip{"byte-array",
                        {Value::binary({0x00, 0x00}), 8, false},
                        Value::object()};
    CHECK(apply_byzantine(registry, flip) ==
          Value::binary({0x00, 0x80}));
  }

  SECTION("structured documents walk the leaf spaces") {
    Value doc = Value::object();
    doc["name"] = "ab";
    doc["ok"] = true;
    ByzantineFault fault{"structured-document", {doc, 2, false},
                         Value::object()};
    const Value corrupted = apply_byzantine(registry, fault);
    CHECK(corrupted["ok"] == Value(false));
    CHECK(corrupted["name"] == Value("ab"));
  }

  SECTION("cache misses replay their fixed substitutions") {
    ByzantineFault fault{"cache_miss", {Value("hit"), 0, false},
                         Value::object()};
    CHECK(apply_byzantine(registry, fault) == Value(nullptr));
    fault.state.context = 2;
    CHECK(apply_byzantine(registry, fault) == Value(Value::array()));
  }
}

TEST_CASE("fault identities are stable and discriminating") {
  const ExceptionFault timeout{"T", std::nullopt, "m", std::nullopt};
  const ExceptionFault coded{"T", "c", "m", std::nullopt};
  const ByzantineFault step0{"string", {Value("ab"), 0, false}, Value()};
  const ByzantineFault step1{"string", {Value("ab"), 1, false}, Value()};

  std::set<std::string> identities = {
      fault_identity(FaultSpec(timeout)), fault_identity(FaultSpec(coded)),
      fault_identity(FaultSpec(step0)), fault_identity(FaultSpec(step1))};
  CHECK(identities.size() == 4);
  CHECK(fault_identity(FaultSpec(timeout)) ==
        fault_identity(FaultSpec(ExceptionFault{timeout})));
}

TEST_CASE("assignment signatures ignore entry order") {
  const CallSiteId site_a{"aaaa"};
  const CallSiteId site_b{"bbbb"};
  const FaultSpec fault_a =
      ExceptionFault{"A", std::nullopt, "first", std::nullopt};
  const FaultSpec fault_b =
      ExceptionFault{"B", std::nullopt, "second", std::nullopt};

  FaultAssignment forward{{{site_a, "I/m", fault_a}, {site_b, "I/n", fault_b}}};
  FaultAssignment reversed{{{site_b, "I/n", fault_b}, {site_a, "I/m", fault_a}}};
  CHECK(assignment_signature(forward) == assignment_signature(reversed));

  FaultAssignment different{{{site_a, "I/m", fault_b}}};
  CHECK(assignment_signature(forward) != assignment_signature(different));
  CHECK(assignment_signature(FaultAssignment{}) == "");

  CHECK(forward.find(site_a) != nullptr);
  CHECK(forward.find(site_a)->method_fqn == "I/m");
  CHECK(forward.find(CallSiteId{"cccc"}) == nullptr);
  CHECK(forward.size() == 2);
  CHECK_FALSE(forward.empty());
}

TEST_CASE("faults serialize for reports") {
  SECTION("exceptions carry nullable code and cause") {
    const Value out = to_value(
        ExceptionFault{"E", std::nullopt, "boom", std::nullopt});
    CHECK(out["kind"] == "exception");
    CHECK(out["name"] == "E");
    CHECK(out["code"].is_null());
    CHECK(out["message"] == "boom");
    CHECK(out["cause_message"].is_null());
  }
  SECTION("byzantine faults embed their accumulator") {
    TransformerRegistry registry;
    const Value reference("joe");
    const Value accumulator =
        scalar_accumulator(StringMutateTransformer{}, reference, 1);
    const Value out = to_value(ByzantineFault{
        "string", {reference, 1, false}, accumulator});
    CHECK(out["kind"] == "byzantine");
    CHECK(out["transformer"] == "string");
    CHECK(out["referenceValue"] == "joe");
    CHECK(out["context"] == 1);
    CHECK(out["accumulator"]["context"] == 1);
  }
  SECTION("the fault-injected cell renders by family") {
    const ExceptionFault exc{"E", std::nullopt, "boom", std::nullopt};
    CHECK(fault_injected_text(FaultSpec(exc)) == render_exception(exc));
    const Value accumulator =
        Value::parse(R"({"referenceValue": "ab", "context": 0})");
    const ByzantineFault byz{"string", {Value("ab"), 0, false}, accumulator};
    CHECK(fault_injected_text(FaultSpec(byz)) ==
          R"({"referenceValue":"ab","context":0})");
  }
}

TEST_CASE("catalogs validate against registered interfaces") {
  const InterfaceRegistry& registry = cache_registry();

  SECTION("a well-formed catalog materializes") {
    const FaultCatalog catalog = load_catalog(minimal_catalog(), registry);
    CHECK(catalog.client_interface == "CacheCommands");
    REQUIRE(catalog.entries.size() == 1);
    const CatalogEntry& entry = catalog.entries[0];
    CHECK(entry.method_fqn == "CacheCommands/get");
    REQUIRE(entry.exceptions.size() == 2);
    CHECK(entry.exceptions[0].name == "CacheTimeoutException");
    CHECK(entry.exceptions[0].async_capable);
    CHECK_FALSE(entry.exceptions[0].code.has_value());
    CHECK(entry.exceptions[1].code == "UNAVAILABLE");
    CHECK(entry.exceptions[1].cause_message == "Connection refused");
    CHECK_FALSE(entry.exceptions[1].async_capable);

    const ExceptionFault fault = entry.exceptions[1].to_fault();
    CHECK(fault.exception_name == "CacheUnavailableException");
    CHECK(fault.code == "UNAVAILABLE");

    CHECK(catalog.find("CacheCommands/get") == &entry);
    CHECK(catalog.find("CacheCommands/async_get") == nullptr);
  }

  SECTION("the declared interface must be registered") {
    Value doc = minimal_catalog();
    doc["client_interface"] = "UnknownCommands";
    CHECK_THROWS_AS(load_catalog(doc, registry), UnknownInterfaceError);
  }

  SECTION("every method must exist on the interface") {
    Value doc = minimal_catalog();
    doc["entries"][0]["method"] = "CacheCommands/del";
    CHECK_THROWS_AS(load_catalog(doc, registry), UnknownMethodError);
  }

  SECTION("methods must be qualified with the declaring interface") {
    Value doc = minimal_catalog();
    doc["entries"][0]["method"] = "get";
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);
    doc["entries"][0]["method"] = "OtherCommands/get";
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);
  }

  SECTION("malformed documents are rejected") {
    CHECK_THROWS_AS(load_catalog(Value::parse(R"({"entries": []})"), registry),
                    SchemaError);
    Value doc = minimal_catalog();
    doc["entries"] = "nope";
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);

    doc = minimal_catalog();
    doc["entries"][0].erase("exceptions");
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);

    doc = minimal_catalog();
    doc["entries"][0]["exceptions"][0].erase("message");
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);

    doc = minimal_catalog();
    doc["entries"][0]["exceptions"][0]["code"] = 99;
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);

    doc = minimal_catalog();
    doc["entries"][0]["exceptions"][0]["async_capable"] = "yes";
    CHECK_THROWS_AS(load_catalog(doc, registry), SchemaError);

    CHECK_THROWS_AS(load_catalog_text("not json", registry), SchemaError);
  }

  SECTION("a null code is treated as absent") {
    Value doc = minimal_catalog();
    doc["entries"][0]["exceptions"][0]["code"] = nullptr;
    const FaultCatalog catalog = load_catalog(doc, registry);
    CHECK_FALSE(catalog.entries[0].exceptions[0].code.has_value());
  }
}

TEST_CASE("catalog files load with path-qualified diagnostics") {
  const InterfaceRegistry& registry = cache_registry();
  const std::string path = "test_catalog_tmp.catalog";

  SECTION("missing files raise an io error") {
    CHECK_THROWS_AS(load_catalog_file("does_not_exist.catalog", registry),
                    IoError);
  }

  SECTION("schema problems name the offending file") {
    {
      std::ofstream out(path);
      out << "{\"client_interface\": 42}";
    }
    try {
      load_catalog_file(path, registry);
      FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find(path) == 0);
    }
    std::remove(path.c_str());
  }

  SECTION("valid files round-trip") {
    {
      std::ofstream out(path);
      out << minimal_catalog().dump(2);
    }
    const FaultCatalog catalog = load_catalog_file(path, registry);
    CHECK(catalog.entries.size() == 1);
    std::remove(path.c_str());
  }
}

TEST_CASE("catalog sets merge entries and filter async-capable faults") {
  const InterfaceRegistry& registry = cache_registry();

  Value second = Value::parse(R"({
    "client_interface": "CacheCommands",
    "entries": [
      {"method": "CacheCommands/get",
       "exceptions": [
         {"name": "ExtraException", "message": "extra", "async_capable": true}
       ]}
    ]
  })");

  CatalogSet set;
  CHECK(set.empty());
  set.add(load_catalog(minimal_catalog(), registry));
  set.add(load_catalog(second, registry));
  CHECK_FALSE(set.empty());
  CHECK(set.catalogs().size() == 2);

  const auto sync_faults = set.faults_for("CacheCommands/get", false);
  REQUIRE(sync_faults.size() == 3);
  CHECK(sync_faults[0].exception_name == "CacheTimeoutException");
  CHECK(sync_faults[1].exception_name == "CacheUnavailableException");
  CHECK(sync_faults[2].exception_name == "ExtraException");

  const auto async_faults = set.faults_for("CacheCommands/get", true);
  REQUIRE(async_faults.size() == 2);
  CHECK(async_faults[0].exception_name == "CacheTimeoutException");
  CHECK(async_faults[1].exception_name == "ExtraException");

  CHECK(set.faults_for("CacheCommands/async_get", false).empty());
}
