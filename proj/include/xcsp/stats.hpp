#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "xcsp/error.hpp"
#include "xcsp/model.hpp"

namespace xcsp {

struct InstanceStats {
  InstanceType type = InstanceType::csp;
  std::size_t domains = 0, variables = 0, relations = 0, predicates = 0, functions = 0, constraints = 0;
  std::size_t max_arity = 0;
  /// Product of the domain sizes, in decimal.
  std::string search_space;
  /// Global usage by catalog spelling, sorted by name.
  std::vector<std::pair<std::string, std::size_t>> globals;
  /// Attribute cross-checks, such as a stale maxConstraintArity.
  std::vector<Diagnostic> warnings;
};

InstanceStats compute_stats(const Instance& instance);

/// Single-line JSON record with keys in a fixed order.
std::string stats_json(const InstanceStats& stats);
/// "key=value" lines.
std::string stats_text(const InstanceStats& stats);

}  // namespace xcsp
