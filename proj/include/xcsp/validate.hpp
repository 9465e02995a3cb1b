#pragma once

#include <string>
#include <vector>

#include "xcsp/error.hpp"
#include "xcsp/model.hpp"

namespace xcsp {

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool strict = false;
  bool passed = true;  // no error-severity diagnostic
};

struct CompetitionOptions {
  /// Report naming-convention deviations as errors instead of warnings.
  bool naming_as_errors = false;
  /// Emit an informational warning for constraints sharing a scope.
  bool suggest_merges = false;
};

/// Checks beyond what loading enforces: arities, parameter coverage,
/// expression typing, cost bounds and quantification structure.
ValidationReport validate_structure(const Instance& instance);

/// validate_structure plus the competition restrictions.
ValidationReport validate_competition(const Instance& instance, CompetitionOptions options = {});

/// Scope sorted by variable name.
std::vector<std::string> normalized_scope(const std::vector<std::string>& scope);

/// "severity code path @offset: message", one line per diagnostic.
std::string format_text(const std::vector<Diagnostic>& diagnostics);
/// One JSON object per line with severity, code, path, offset, message.
std::string format_json_lines(const std::vector<Diagnostic>& diagnostics);

}  // namespace xcsp
