#pragma once

// Catalog of recognized global constraints: names, the conventional key
// order of dictionaries in each parameter position, and binding of
// positional dictionaries to keys.

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xcsp/param_value.hpp"

namespace xcsp {

struct KeyOrder {
  std::size_t param = 0;               // parameter position
  std::vector<std::string_view> keys;  // conventional order
};

struct GlobalInfo {
  std::string_view name;     // lower-case lookup key
  std::string_view display;  // spelling used on output
  bool competition = false;  // one of the four with built-in semantics
  std::vector<KeyOrder> orders;

  const KeyOrder* order_for(std::size_t param) const noexcept;
};

/// Case-insensitive lookup; nullptr for unknown names.
const GlobalInfo* find_global(std::string_view name) noexcept;
std::span<const GlobalInfo> global_catalog() noexcept;

/// Fills in keys of positional dictionaries from the conventional order of
/// `name` and marks them bound. Unknown globals are returned unchanged.
/// Throws DictArityMismatch when a positional dictionary has the wrong
/// number of values.
std::vector<ParamValue> bind_conventional_order(std::string_view name, std::vector<ParamValue> params);

/// Rewrites dictionaries for abridged output: every keyed dictionary whose
/// keys all belong to the conventional order is emitted positionally, with
/// nil standing for missing keys.
std::vector<ParamValue> to_conventional_order(std::string_view name, std::vector<ParamValue> params);

/// Rewrites dictionaries for tagged output: bound dictionaries become keyed
/// and nil entries are dropped. Unbound positional dictionaries are kept.
std::vector<ParamValue> to_keyed_form(std::vector<ParamValue> params);

/// True when `params` uses the old list-of-lists weightedSum syntax.
bool is_deprecated_weighted_sum(std::span<const ParamValue> params) noexcept;

/// Shape check for the four competition globals. Returns a description of
/// the first problem, or nullopt when the parameters fit the signature.
std::optional<std::string> check_signature(std::string_view name, std::span<const ParamValue> params);

/// Every variable name referenced anywhere inside `params`, in order of
/// first occurrence.
std::vector<std::string> referenced_variables(std::span<const ParamValue> params);

}  // namespace xcsp
