#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xcsp/error.hpp"
#include "xcsp/model.hpp"

namespace xcsp {

enum class Notation { tagged, abridged };

std::string_view to_string(Notation n) noexcept;
std::optional<Notation> notation_from_string(std::string_view text) noexcept;

struct LoadResult {
  std::optional<Instance> instance;  // absent when any error was reported
  std::vector<Diagnostic> diagnostics;

  bool ok() const noexcept { return instance.has_value(); }
};

/// Reads a document in tagged, abridged or mixed notation. Never throws for
/// malformed input; every problem is reported as a diagnostic.
LoadResult load_instance(std::string_view bytes);

/// Deterministic serialization in one notation.
std::string write_instance(const Instance& instance, Notation notation);

/// load + write. Throws Error("LoadFailed") carrying the first error.
std::string convert(std::string_view bytes, Notation target);

}  // namespace xcsp
