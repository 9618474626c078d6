#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "faultline/errors.hpp"
#include "faultline/transform.hpp"
#include "faultline/value.hpp"

namespace faultline {

/// One transformable leaf of a structured document, in depth-first
/// declaration order. Array elements are addressed by their decimal index.
struct LeafInfo {
  std::vector<std::string> path;
  Value reference;
  TypeTag tag = TypeTag::Null;
  const Transformer* transformer = nullptr;
  bool user_supplied = false;
  std::size_t space = 0;
};

namespace detail {

inline std::string join_path(const std::vector<std::string>& path) {
  std::string out;
  for (const auto& segment : path) {
    if (!out.empty()) out.push_back('.');
    out += segment;
  }
  return out;
}

inline void collect_leaves_impl(const TransformerRegistry& registry,
                                const Value& node,
                                std::vector<std::string>& path,
                                std::vector<LeafInfo>& out,
                                std::vector<std::string>* warnings) {
  if (node.is_object()) {
    for (auto it = node.begin(); it != node.end(); ++it) {
      path.push_back(it.key());
      collect_leaves_impl(registry, it.value(), path, out, warnings);
      path.pop_back();
    }
    return;
  }
  if (node.is_array()) {
    for (std::size_t i = 0; i < node.size(); ++i) {
      path.push_back(std::to_string(i));
      collect_leaves_impl(registry, node[i], path, out, warnings);
      path.pop_back();
    }
    return;
  }
  const TypeTag tag = type_of(node);
  if (tag == TypeTag::Null) return;  // nothing to corrupt; skipped silently
  const Transformer* transformer = registry.transformer_for(tag);
  if (!transformer) {
    if (warnings)
      warnings->push_back("no transformer registered for " +
                          std::string(to_string(tag)) + " leaf at '" +
                          join_path(path) + "'; leaf skipped");
    return;
  }
  out.push_back(LeafInfo{path, node, tag, transformer,
                         registry.is_user_registered(tag),
                         transformer->space_size(node)});
}

/// Descends a (possibly nested) document along `path`, interpreting segments
/// as array indices where the structure is an array.
inline Value* value_at_path(Value& root, const std::vector<std::string>& path) {
  Value* current = &root;
  for (const auto& segment : path) {
    if (current->is_array())
      current = &(*current)[static_cast<std::size_t>(std::stoul(segment))];
    else
      current = &(*current)[segment];
  }
  return current;
}

inline const Value* value_at_path(const Value& root,
                                  const std::vector<std::string>& path) {
  return value_at_path(const_cast<Value&>(root), path);
}

}  // namespace detail

inline std::vector<LeafInfo> collect_leaves(
    const TransformerRegistry& registry, const Value& document,
    std::vector<std::string>* warnings = nullptr) {
  std::vector<LeafInfo> leaves;
  std::vector<std::string> path;
  detail::collect_leaves_impl(registry, document, path, leaves, warnings);
  return leaves;
}

/// Total corruption steps over all leaves of the document.
inline std::size_t document_space(const TransformerRegistry& registry,
                                  const Value& document,
                                  std::vector<std::string>* warnings = nullptr) {
  std::size_t total = 0;
  for (const auto& leaf : collect_leaves(registry, document, warnings))
    total += leaf.space;
  return total;
}

namespace detail {

struct ActiveLeaf {
  std::size_t leaf_index = 0;
  std::size_t local_context = 0;
};

inline ActiveLeaf find_active_leaf(const std::vector<LeafInfo>& leaves,
                                   std::size_t step) {
  std::size_t offset = 0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (leaves[i].space == 0) continue;
    if (step < offset + leaves[i].space) return {i, step - offset};
    offset += leaves[i].space;
  }
  throw ExhaustedError("document corruption step out of range");
}

/// Leaf progress marker: the reference value plus, for transformers whose
/// position matters, the index of the applied corruption.
inline Value leaf_state(const LeafInfo& leaf, std::size_t local_context) {
  Value state = Value::object();
  state["referenceValue"] = leaf.reference;
  if (leaf.transformer->context_in_accumulator())
    state["context"] = local_context;
  return state;
}

/// Finds (or appends, preserving traversal order) the context entry for
/// `key` inside an accumulator node, creating the nested accumulator scaffold
/// for intermediate document levels.
inline Value* context_slot(Value& accumulator_node, const std::string& key) {
  Value& context = accumulator_node["context"];
  for (auto& entry : context)
    if (entry["key"] == key) return &entry["value"];
  Value entry = Value::object();
  entry["key"] = key;
  entry["value"] = Value::object();
  context.push_back(std::move(entry));
  return &context.back()["value"];
}

}  // namespace detail

/// Fresh accumulator for a document no step has been applied to yet.
inline Value make_document_state(const Value& document) {
  Value accumulator = Value::object();
  accumulator["referenceValue"] = document;
  accumulator["context"] = Value::array();
  return accumulator;
}

/// Returns a copy of the document with exactly the leaf corruption selected
/// by `step` applied (steps index the concatenated per-leaf spaces in
/// traversal order).
inline Value document_apply(const TransformerRegistry& registry,
                            const Value& document, std::size_t step) {
  const auto leaves = collect_leaves(registry, document);
  const auto active = detail::find_active_leaf(leaves, step);
  const LeafInfo& leaf = leaves[active.leaf_index];
  Value corrupted = document;
  *detail::value_at_path(corrupted, leaf.path) = checked_apply(
      *leaf.transformer, leaf.user_supplied, leaf.reference,
      active.local_context);
  return corrupted;
}

/// Serializes traversal progress after `step` has been applied: the whole
/// reference document, plus one context entry per leaf visited so far (in
/// traversal order) — completed leaves carry their final context index, the
/// in-progress leaf its current one, and unvisited leaves appear only inside
/// the reference value. Nested documents nest their own accumulators.
inline Value document_accumulator(const TransformerRegistry& registry,
                                  const Value& document, std::size_t step) {
  const auto leaves = collect_leaves(registry, document);
  const auto active = detail::find_active_leaf(leaves, step);

  Value accumulator = make_document_state(document);
  for (std::size_t i = 0; i <= active.leaf_index; ++i) {
    const LeafInfo& leaf = leaves[i];
    if (leaf.space == 0) continue;
    const bool is_active = i == active.leaf_index;
    const std::size_t local = is_active ? active.local_context : leaf.space - 1;

    Value* node = &accumulator;
    for (std::size_t depth = 0; depth + 1 < leaf.path.size(); ++depth) {
      Value* slot = detail::context_slot(*node, leaf.path[depth]);
      if (slot->empty()) {
        std::vector<std::string> prefix(leaf.path.begin(),
                                        leaf.path.begin() + depth + 1);
        *slot = make_document_state(*detail::value_at_path(document, prefix));
      }
      node = slot;
    }
    *detail::context_slot(*node, leaf.path.back()) =
        detail::leaf_state(leaf, local);
  }
  return accumulator;
}

/// Accumulator form for a scalar (non-document) reference value.
inline Value scalar_accumulator(const Transformer& transformer,
                                const Value& reference, std::size_t context) {
  Value state = Value::object();
  state["referenceValue"] = reference;
  if (transformer.context_in_accumulator()) state["context"] = context;
  return state;
}

namespace detail {

struct AccumulatorCursor {
  std::vector<std::string> path;  // to the in-progress leaf
  Value leaf_reference;
  std::size_t leaf_context = 0;  // 0 when the marker carries no context
};

/// Walks the chain of last context entries down to the in-progress leaf.
inline AccumulatorCursor active_cursor(const Value& accumulator) {
  AccumulatorCursor cursor;
  const Value* node = &accumulator;
  while (true) {
    if (!node->is_object() || !node->contains("context") ||
        !(*node)["context"].is_array() || (*node)["context"].empty())
      throw ContractViolationError("malformed accumulator document");
    const Value& entry = (*node)["context"].back();
    cursor.path.push_back(entry.at("key").get<std::string>());
    const Value& value = entry.at("value");
    if (value.contains("context") && value["context"].is_array()) {
      node = &value;  // nested document accumulator
      continue;
    }
    cursor.leaf_reference = value.at("referenceValue");
    cursor.leaf_context = value.contains("context")
                              ? value["context"].get<std::size_t>()
                              : 0;
    return cursor;
  }
}

}  // namespace detail

/// Reconstructs the corrupted document from a serialized accumulator alone:
/// the reference document is embedded, the last context entry chain names
/// the in-progress leaf, and its recorded progress is re-applied.
inline Value replay_accumulator(const TransformerRegistry& registry,
                                const Value& accumulator) {
  const auto cursor = detail::active_cursor(accumulator);
  const Transformer* transformer =
      registry.transformer_for(type_of(cursor.leaf_reference));
  if (!transformer)
    throw ContractViolationError("no transformer for accumulator leaf at '" +
                                 detail::join_path(cursor.path) + "'");
  Value corrupted = accumulator.at("referenceValue");
  *detail::value_at_path(corrupted, cursor.path) =
      transformer->apply(cursor.leaf_reference, cursor.leaf_context);
  return corrupted;
}

struct StructuredStep {
  Value corrupted;
  Value accumulator;  // state after this step
  bool exhausted = false;
};

/// One step of the document traversal, driven by the accumulator itself: an
/// accumulator with an empty context starts at step 0, otherwise the step
/// after the recorded in-progress leaf position runs next.
inline StructuredStep structured_transform(const TransformerRegistry& registry,
                                           const Value& accumulator) {
  const Value& document = accumulator.at("referenceValue");
  const auto leaves = collect_leaves(registry, document);
  const std::size_t space = document_space(registry, document);

  std::size_t next_step = 0;
  if (accumulator.contains("context") && !accumulator["context"].is_array())
    throw ContractViolationError("malformed accumulator document");
  if (accumulator.contains("context") && !accumulator["context"].empty()) {
    const auto cursor = detail::active_cursor(accumulator);
    std::size_t offset = 0;
    bool found = false;
    for (const auto& leaf : leaves) {
      if (leaf.path == cursor.path) {
        next_step = offset + cursor.leaf_context + 1;
        found = true;
        break;
      }
      offset += leaf.space;
    }
    if (!found)
      throw ContractViolationError(
          "accumulator references a leaf absent from the document");
  }

  if (next_step >= space)
    throw ExhaustedError("document transformer space exhausted");

  StructuredStep result;
  result.corrupted = document_apply(registry, document, next_step);
  result.accumulator = document_accumulator(registry, document, next_step);
  result.exhausted = next_step + 1 >= space;
  return result;
}

/// Corruption-space view over an arbitrary response value: documents expand
/// into per-leaf steps unless the user registered a whole-document
/// transformer; scalars use the transformer for their kind.
inline std::size_t byzantine_space(const TransformerRegistry& registry,
                                   const Value& response,
                                   std::vector<std::string>* warnings = nullptr) {
  const TypeTag tag = type_of(response);
  if (tag == TypeTag::Null) return 0;
  if (tag == TypeTag::Document && !registry.is_user_registered(TypeTag::Document))
    return document_space(registry, response, warnings);
  const Transformer* transformer = registry.transformer_for(tag);
  if (!transformer) {
    if (warnings)
      warnings->push_back("no transformer registered for " +
                          std::string(to_string(tag)) +
                          " response; call site skipped");
    return 0;
  }
  return transformer->space_size(response);
}

inline std::string byzantine_transformer_id(const TransformerRegistry& registry,
                                            const Value& response) {
  const TypeTag tag = type_of(response);
  if (tag == TypeTag::Document && !registry.is_user_registered(TypeTag::Document))
    return "structured-document";
  const Transformer* transformer = registry.transformer_for(tag);
  return transformer ? transformer->name() : std::string(to_string(tag));
}

inline Value byzantine_apply(const TransformerRegistry& registry,
                             const Value& response, std::size_t step) {
  const TypeTag tag = type_of(response);
  if (tag == TypeTag::Document && !registry.is_user_registered(TypeTag::Document))
    return document_apply(registry, response, step);
  const Transformer* transformer = registry.transformer_for(tag);
  if (!transformer)
    throw ExhaustedError("no transformer available for " +
                         std::string(to_string(tag)));
  return checked_apply(*transformer, registry.is_user_registered(tag), response,
                       step);
}

inline Value byzantine_accumulator(const TransformerRegistry& registry,
                                   const Value& response, std::size_t step) {
  const TypeTag tag = type_of(response);
  if (tag == TypeTag::Document && !registry.is_user_registered(TypeTag::Document))
    return document_accumulator(registry, response, step);
  const Transformer* transformer = registry.transformer_for(tag);
  if (!transformer)
    throw ExhaustedError("no transformer available for " +
                         std::string(to_string(tag)));
  return scalar_accumulator(*transformer, response, step);
}

}  // namespace faultline
