#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "faultline/call_site.hpp"
#include "faultline/digest.hpp"
#include "faultline/value.hpp"

using namespace faultline;

// Digest expectations below were produced with an independent SHA-1
// implementation before this library existed; they pin the exact byte
// encoding of call-site identities.

TEST_CASE("sha1_hex matches reference vectors") {
  CHECK(sha1_hex("") == "da39a3ee5e6b4b0d3255bfef95601890afd80709");
  CHECK(sha1_hex("abc") == "a9993e364706816aba3e25717850c26c9cd0d89d");
  CHECK(sha1_hex("The quick brown fox jumps over the lazy dog") ==
        "2fd4e1c67a2d28fced849ee1bb76e7391b93eb12");
  CHECK(sha1_hex(std::string(1000000, 'a')) ==
        "34aa973cd4c4daa4f61eeb2bdbad27316534016f");
}

TEST_CASE("canonical_json is order-stable and binary-safe") {
  SECTION("object keys are sorted") {
    Value doc = Value::object();
    doc["b"] = 1;
    doc["a"] = Value::object();
    doc["a"]["d"] = true;
    doc["a"]["c"] = nullptr;
    CHECK(canonical_json(doc) == R"({"a":{"c":null,"d":true},"b":1})");
    CHECK(sha1_hex(canonical_json(doc)) ==
          "05b95ea2845fed3adadc21cca9f0d625aca0a272");

    Value reordered = Value::object();
    reordered["a"] = Value::object();
    reordered["a"]["c"] = nullptr;
    reordered["a"]["d"] = true;
    reordered["b"] = 1;
    CHECK(canonical_json(reordered) == canonical_json(doc));
  }

  SECTION("binary payloads serialize as tagged hex") {
    Value bytes = Value::binary({0xde, 0xad});
    CHECK(canonical_json(bytes) == R"({"$bytes":"dead"})");
  }

  SECTION("empty argument list") {
    CHECK(canonical_json(Value::array()) == "[]");
    CHECK(digest_arguments({}) == "97d170e1550eee4afc0af065b78cda302a97674c");
  }
}

TEST_CASE("argument digests") {
  const std::vector<Value> args = {Value("john_doe")};
  CHECK(digest_arguments(args) == "ad4a4fb21c6cc5b3ba959b8ec4a2cd6621eaf456");
}

TEST_CASE("call-site ids are stable digests over method, args, ordinal") {
  const std::vector<Value> args = {Value("john_doe")};

  SECTION("known id for the profile read") {
    const CallDescriptor d = make_descriptor("KeyValueCommands/get", args, 0);
    CHECK(d.method_fqn == "KeyValueCommands/get");
    CHECK(d.args_digest == "ad4a4fb21c6cc5b3ba959b8ec4a2cd6621eaf456");
    CHECK(d.args_preview == "[john_doe]");
    CHECK(d.ordinal == 0);
    CHECK(resolve_call_site_id(d).value ==
          "0f6f18aa722a7461de74a1fc12ce4874a3d9c139");
  }

  SECTION("ordinal distinguishes repeated identical calls") {
    const CallDescriptor second = make_descriptor("KeyValueCommands/get", args, 1);
    CHECK(resolve_call_site_id(second).value ==
          "d9ef83c957c071ee5b9bd4b53c88a83986193788");
  }

  SECTION("different arguments produce different ids") {
    const CallDescriptor other =
        make_descriptor("KeyValueCommands/get", {Value("joe_bloggs")}, 0);
    CHECK(resolve_call_site_id(other).value !=
          "0f6f18aa722a7461de74a1fc12ce4874a3d9c139");
  }

  SECTION("identical descriptors resolve identically") {
    const CallDescriptor a = make_descriptor("KeyValueCommands/get", args, 0);
    const CallDescriptor b = make_descriptor("KeyValueCommands/get", args, 0);
    CHECK(resolve_call_site_id(a) == resolve_call_site_id(b));
  }

  SECTION("argument order matters, key order inside documents does not") {
    Value doc_ab = Value::object();
    doc_ab["a"] = 1;
    doc_ab["b"] = 2;
    Value doc_ba = Value::object();
    doc_ba["b"] = 2;
    doc_ba["a"] = 1;
    CHECK(digest_arguments({doc_ab}) == digest_arguments({doc_ba}));
    CHECK(digest_arguments({Value("x"), Value("y")}) !=
          digest_arguments({Value("y"), Value("x")}));
  }
}

TEST_CASE("test identity digest") {
  CHECK(sha1_hex("fig2/user_profile_login") ==
        "0b7f96047016cbac369b838736fcf2478275ede4");
}

TEST_CASE("argument previews render leaves like report cells") {
  CHECK(preview_arguments({}) == "[]");
  CHECK(preview_arguments({Value("a"), Value(true)}) == "[a, true]");
  Value doc = Value::object();
  doc["flag"] = false;
  CHECK(preview_arguments({doc}) == R"([{"flag":"false"}])");
  CHECK(preview_arguments({Value::binary({0x0f})}) == "[0x0f]");
}
