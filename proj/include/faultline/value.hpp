#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace faultline {

/// Database responses and request arguments are modeled as JSON-like typed
/// values. Object fields keep their declaration order, which drives the
/// leaf visit order of structured corruptions.
using Value = nlohmann::ordered_json;

enum class TypeTag { String, Boolean, ByteArray, Document, Number, Null };

inline std::string_view to_string(TypeTag tag) {
  switch (tag) {
    case TypeTag::String: return "string";
    case TypeTag::Boolean: return "boolean";
    case TypeTag::ByteArray: return "byte-array";
    case TypeTag::Document: return "structured-document";
    case TypeTag::Number: return "number";
    case TypeTag::Null: return "null";
  }
  return "unknown";
}

inline TypeTag type_of(const Value& v) {
  if (v.is_string()) return TypeTag::String;
  if (v.is_boolean()) return TypeTag::Boolean;
  if (v.is_binary()) return TypeTag::ByteArray;
  if (v.is_object() || v.is_array()) return TypeTag::Document;
  if (v.is_number()) return TypeTag::Number;
  return TypeTag::Null;
}

inline std::string to_hex(const std::vector<std::uint8_t>& bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0F]);
  }
  return out;
}

namespace detail {

// Canonical form: plain (key-sorted) JSON with binary payloads replaced by
// a tagged hex object, so every value has a deterministic byte encoding.
inline nlohmann::json canonical_form(const Value& v) {
  switch (v.type()) {
    case Value::value_t::object: {
      nlohmann::json out = nlohmann::json::object();
      for (const auto& [key, item] : v.items()) out[key] = canonical_form(item);
      return out;
    }
    case Value::value_t::array: {
      nlohmann::json out = nlohmann::json::array();
      for (const auto& item : v) out.push_back(canonical_form(item));
      return out;
    }
    case Value::value_t::binary:
      return nlohmann::json{{"$bytes", to_hex(v.get_binary())}};
    case Value::value_t::string:
      return nlohmann::json(v.get<std::string>());
    case Value::value_t::boolean:
      return nlohmann::json(v.get<bool>());
    case Value::value_t::number_integer:
      return nlohmann::json(v.get<std::int64_t>());
    case Value::value_t::number_unsigned:
      return nlohmann::json(v.get<std::uint64_t>());
    case Value::value_t::number_float:
      return nlohmann::json(v.get<double>());
    default:
      return nlohmann::json(nullptr);
  }
}

}  // namespace detail

/// Order-stable serialization: object keys sorted, numbers in nlohmann's
/// fixed textual form. Same value always yields the same bytes.
inline std::string canonical_json(const Value& v) {
  return detail::canonical_form(v).dump();
}

/// Order-preserving copy with binary payloads replaced by a tagged hex
/// object; safe to embed in JSON reports (raw binary values cannot be
/// serialized as text).
inline Value display_form(const Value& v) {
  if (v.is_object()) {
    Value out = Value::object();
    for (const auto& [key, item] : v.items()) out[key] = display_form(item);
    return out;
  }
  if (v.is_array()) {
    Value out = Value::array();
    for (const auto& item : v) out.push_back(display_form(item));
    return out;
  }
  if (v.is_binary()) return Value{{"$bytes", to_hex(v.get_binary())}};
  return v;
}

/// Human-readable rendering for report cells. Scalars inside documents are
/// stringified, strings appear bare.
inline std::string preview_value(const Value& v);

namespace detail {

inline Value stringify_leaves(const Value& v) {
  if (v.is_object()) {
    Value out = Value::object();
    for (const auto& [key, item] : v.items()) out[key] = stringify_leaves(item);
    return out;
  }
  if (v.is_array()) {
    Value out = Value::array();
    for (const auto& item : v) out.push_back(stringify_leaves(item));
    return out;
  }
  return Value(preview_value(v));
}

}  // namespace detail

inline std::string preview_value(const Value& v) {
  switch (v.type()) {
    case Value::value_t::string:
      return v.get<std::string>();
    case Value::value_t::boolean:
      return v.get<bool>() ? "true" : "false";
    case Value::value_t::binary:
      return "0x" + to_hex(v.get_binary());
    case Value::value_t::null:
      return "null";
    case Value::value_t::object:
    case Value::value_t::array:
      return detail::stringify_leaves(v).dump();
    default:
      return v.dump();
  }
}

inline std::string preview_arguments(const std::vector<Value>& args) {
  std::string out = "[";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out += ", ";
    out += preview_value(args[i]);
  }
  out += "]";
  return out;
}

}  // namespace faultline
