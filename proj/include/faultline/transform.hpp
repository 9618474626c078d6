#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "faultline/errors.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// Cursor into a transformer's corruption space for one reference value.
/// `context` is the index of the next corruption step to produce.
struct TransformerState {
  Value reference_value;
  std::size_t context = 0;
  bool exhausted = false;

  friend bool operator==(const TransformerState&,
                         const TransformerState&) = default;
};

inline TransformerState make_state(Value reference) {
  return TransformerState{std::move(reference), 0, false};
}

class Transformer;

/// State creation aware of the transformer's space: values with no
/// corruption steps (empty strings, empty byte arrays) start out exhausted.
TransformerState make_state(const Transformer& transformer, Value reference);

struct StepResult {
  Value corrupted;
  TransformerState next;
};

/// A deterministic corruption family for one value kind. Implementations are
/// pure: `apply` must return the same corrupted value for the same
/// (reference, context) pair, must never return the reference itself, and
/// each context in [0, space_size) must yield a distinct corruption.
class Transformer {
 public:
  virtual ~Transformer() = default;

  /// Identifier recorded in reports (matches the value-kind label).
  virtual std::string name() const = 0;

  /// Number of distinct corruption steps available for this reference.
  virtual std::size_t space_size(const Value& reference) const = 0;

  virtual Value apply(const Value& reference, std::size_t context) const = 0;

  /// Single-step spaces carry no meaningful position, so their serialized
  /// accumulator entries omit the context index.
  virtual bool context_in_accumulator() const { return true; }
};

namespace detail {

inline std::vector<std::uint32_t> decode_utf8(const std::string& text) {
  std::vector<std::uint32_t> points;
  const auto* bytes = reinterpret_cast<const std::uint8_t*>(text.data());
  const std::size_t n = text.size();
  std::size_t i = 0;
  while (i < n) {
    const std::uint8_t b = bytes[i];
    std::size_t extra = 0;
    std::uint32_t cp = b;
    if (b < 0x80) {
      extra = 0;
    } else if ((b & 0xE0) == 0xC0) {
      extra = 1;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      extra = 2;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      extra = 3;
      cp = b & 0x07;
    } else {
      // Stray byte: treat it as a one-byte code point and move on.
      points.push_back(b);
      ++i;
      continue;
    }
    if (i + extra >= n && extra > 0) {
      points.push_back(b);
      ++i;
      continue;
    }
    bool valid = true;
    for (std::size_t k = 1; k <= extra; ++k)
      if ((bytes[i + k] & 0xC0) != 0x80) valid = false;
    if (!valid) {
      points.push_back(b);
      ++i;
      continue;
    }
    for (std::size_t k = 1; k <= extra; ++k)
      cp = (cp << 6) | (bytes[i + k] & 0x3F);
    points.push_back(cp);
    i += extra + 1;
  }
  return points;
}

inline std::string encode_utf8(const std::vector<std::uint32_t>& points) {
  std::string out;
  for (const std::uint32_t cp : points) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

/// Printable ASCII cycles to the next printable character; everything else
/// collapses to a space. Either way the result differs from the input.
inline std::uint32_t mutate_code_point(std::uint32_t cp) {
  if (cp >= 0x20 && cp <= 0x7E) return 0x20 + ((cp - 0x20 + 1) % 95);
  return 0x20;
}

}  // namespace detail

class StringMutateTransformer final : public Transformer {
 public:
  std::string name() const override { return "string"; }

  std::size_t space_size(const Value& reference) const override {
    return detail::decode_utf8(reference.get<std::string>()).size();
  }

  Value apply(const Value& reference, std::size_t context) const override {
    auto points = detail::decode_utf8(reference.get<std::string>());
    if (context >= points.size())
      throw ExhaustedError("string mutate context out of range");
    points[context] = detail::mutate_code_point(points[context]);
    return Value(detail::encode_utf8(points));
  }
};

class BoolNegateTransformer final : public Transformer {
 public:
  std::string name() const override { return "boolean"; }

  std::size_t space_size(const Value&) const override { return 1; }

  Value apply(const Value& reference, std::size_t context) const override {
    if (context >= 1) throw ExhaustedError("bool negate context out of range");
    return Value(!reference.get<bool>());
  }

  bool context_in_accumulator() const override { return false; }
};

class ByteFlipTransformer final : public Transformer {
 public:
  explicit ByteFlipTransformer(std::size_t cap = 64) : cap_(cap) {}

  std::string name() const override { return "byte-array"; }

  std::size_t space_size(const Value& reference) const override {
    const std::size_t total_bits = 8 * reference.get_binary().size();
    return std::min(total_bits, cap_);
  }

  Value apply(const Value& reference, std::size_t context) const override {
    auto bytes = reference.get_binary();
    const std::size_t total_bits = 8 * bytes.size();
    const std::size_t space = std::min(total_bits, cap_);
    if (space == 0 || context >= space)
      throw ExhaustedError("byte flip context out of range");
    // Spread the capped steps evenly over the full bit range, MSB first.
    const std::size_t position = (context * total_bits) / space;
    bytes[position / 8] ^=
        static_cast<std::uint8_t>(0x80u >> (position % 8));
    return Value::binary(std::move(bytes));
  }

  std::size_t cap() const { return cap_; }

 private:
  std::size_t cap_;
};

/// Models an empty read: the faulted call answers with null, then an empty
/// string, then an empty collection — always three steps, independent of the
/// reference value.
class CacheMissTransformer final : public Transformer {
 public:
  std::string name() const override { return "cache_miss"; }

  std::size_t space_size(const Value&) const override { return 3; }

  Value apply(const Value&, std::size_t context) const override {
    switch (context) {
      case 0: return Value(nullptr);
      case 1: return Value("");
      case 2: return Value(Value::array());
      default: throw ExhaustedError("cache miss context out of range");
    }
  }
};

inline TransformerState make_state(const Transformer& transformer,
                                   Value reference) {
  TransformerState state{std::move(reference), 0, false};
  state.exhausted = transformer.space_size(state.reference_value) == 0;
  return state;
}

inline StepResult step_with(const Transformer& transformer,
                            const TransformerState& state) {
  const std::size_t space = transformer.space_size(state.reference_value);
  if (state.exhausted || state.context >= space)
    throw ExhaustedError(transformer.name() + " transformer space exhausted");
  StepResult result;
  result.corrupted = transformer.apply(state.reference_value, state.context);
  result.next = state;
  result.next.context = state.context + 1;
  result.next.exhausted = result.next.context >= space;
  return result;
}

inline StepResult string_mutate(const TransformerState& state) {
  return step_with(StringMutateTransformer{}, state);
}

inline StepResult bool_negate(const TransformerState& state) {
  return step_with(BoolNegateTransformer{}, state);
}

inline StepResult byte_flip(const TransformerState& state,
                            std::size_t cap = 64) {
  return step_with(ByteFlipTransformer{cap}, state);
}

inline StepResult cache_miss(const TransformerState& state) {
  return step_with(CacheMissTransformer{}, state);
}

/// Maps value kinds to the transformer used for leaves of that kind.
/// Strings, booleans, and byte arrays are covered out of the box; numbers
/// have no default and are skipped (with a report warning) unless the user
/// registers one. Registered transformers replace the defaults.
class TransformerRegistry {
 public:
  TransformerRegistry() {
    entries_[TypeTag::String] = {std::make_shared<StringMutateTransformer>(),
                                 false};
    entries_[TypeTag::Boolean] = {std::make_shared<BoolNegateTransformer>(),
                                  false};
    entries_[TypeTag::ByteArray] = {
        std::make_shared<ByteFlipTransformer>(byte_flip_cap_), false};
  }

  void register_transformer(TypeTag tag,
                            std::shared_ptr<Transformer> transformer) {
    entries_[tag] = {std::move(transformer), true};
  }

  const Transformer* transformer_for(TypeTag tag) const {
    auto it = entries_.find(tag);
    return it == entries_.end() ? nullptr : it->second.transformer.get();
  }

  bool is_user_registered(TypeTag tag) const {
    auto it = entries_.find(tag);
    return it != entries_.end() && it->second.user;
  }

  /// Adjusts the step budget of the built-in byte flipper. A user-registered
  /// byte-array transformer is left untouched.
  void set_byte_flip_cap(std::size_t cap) {
    byte_flip_cap_ = cap;
    auto it = entries_.find(TypeTag::ByteArray);
    if (it == entries_.end() || !it->second.user)
      entries_[TypeTag::ByteArray] = {
          std::make_shared<ByteFlipTransformer>(cap), false};
  }

  std::size_t byte_flip_cap() const { return byte_flip_cap_; }

  const Transformer& cache_miss_transformer() const { return cache_miss_; }

 private:
  struct Entry {
    std::shared_ptr<Transformer> transformer;
    bool user = false;
  };

  std::map<TypeTag, Entry> entries_;
  std::size_t byte_flip_cap_ = 64;
  CacheMissTransformer cache_miss_;
};

/// Applies a transformer and enforces the corruption contract for
/// user-supplied implementations: the corrupted value must differ from the
/// reference.
inline Value checked_apply(const Transformer& transformer, bool user_supplied,
                           const Value& reference, std::size_t context) {
  Value corrupted = transformer.apply(reference, context);
  if (user_supplied && corrupted == reference)
    throw ContractViolationError("transformer '" + transformer.name() +
                                 "' returned the reference value unchanged");
  return corrupted;
}

}  // namespace faultline
