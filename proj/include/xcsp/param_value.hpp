#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xcsp/cost.hpp"

namespace xcsp {

enum class RelOp { eq, ne, ge, gt, le, lt };

std::string_view to_string(RelOp op) noexcept;
std::optional<RelOp> relop_from_name(std::string_view name) noexcept;
bool compare(Int lhs, RelOp op, Int rhs) noexcept;

struct VarRef {
  std::string name;
  friend bool operator==(const VarRef&, const VarRef&) = default;
};

struct Nil {
  friend bool operator==(Nil, Nil) noexcept { return true; }
};

struct Infinity {
  friend bool operator==(Infinity, Infinity) noexcept { return true; }
};

struct ParamValue;
struct DictEntry;

struct ParamList {
  std::vector<ParamValue> items;
};

/// Keyed map from identifiers to values. A dictionary written in
/// conventional order starts out `positional` with empty keys; once the
/// surrounding global constraint binds it, keys are filled in and
/// `positional` stays set to record its origin.
struct ParamDict {
  std::vector<DictEntry> entries;
  bool positional = false;

  bool keyed() const noexcept;
  /// Value for `key`; nullptr when the key is absent.
  const ParamValue* find(std::string_view key) const noexcept;
};

/// Structured parameter of a global constraint.
struct ParamValue {
  using Variant = std::variant<Int, VarRef, RelOp, Nil, Infinity, ParamList, ParamDict>;
  Variant value;

  ParamValue() : value(Nil{}) {}
  ParamValue(Variant v) : value(std::move(v)) {}

  bool is_int() const noexcept { return std::holds_alternative<Int>(value); }
  bool is_var() const noexcept { return std::holds_alternative<VarRef>(value); }
  bool is_atom() const noexcept { return std::holds_alternative<RelOp>(value); }
  bool is_nil() const noexcept { return std::holds_alternative<Nil>(value); }
  bool is_infinity() const noexcept { return std::holds_alternative<Infinity>(value); }
  bool is_list() const noexcept { return std::holds_alternative<ParamList>(value); }
  bool is_dict() const noexcept { return std::holds_alternative<ParamDict>(value); }

  Int as_int() const { return std::get<Int>(value); }
  const VarRef& as_var() const { return std::get<VarRef>(value); }
  RelOp as_atom() const { return std::get<RelOp>(value); }
  const ParamList& as_list() const { return std::get<ParamList>(value); }
  const ParamDict& as_dict() const { return std::get<ParamDict>(value); }
  ParamList& as_list() { return std::get<ParamList>(value); }
  ParamDict& as_dict() { return std::get<ParamDict>(value); }
};

struct DictEntry {
  std::string key;  // empty for an unbound positional entry
  ParamValue value;
};

/// Exact structural equality: entry order and dictionary origin matter.
bool operator==(const ParamValue& a, const ParamValue& b);
bool operator==(const ParamList& a, const ParamList& b);
bool operator==(const ParamDict& a, const ParamDict& b);
bool operator==(const DictEntry& a, const DictEntry& b);

/// Model equality: keyed dictionaries compare as maps, a key bound to nil is
/// the same as a missing key, and keyed-vs-positional origin is ignored.
bool equivalent(const ParamValue& a, const ParamValue& b);
bool equivalent(const std::vector<ParamValue>& a, const std::vector<ParamValue>& b);

/// Compact abridged rendering used in messages and tests.
std::string to_string(const ParamValue& v);

}  // namespace xcsp
