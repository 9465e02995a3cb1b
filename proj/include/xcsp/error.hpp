#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace xcsp {

inline constexpr std::size_t no_offset = std::numeric_limits<std::size_t>::max();

/// Failure raised by the micro-parsers, the expression engine and the
/// evaluator. `code` is a stable machine-readable identifier such as
/// "InvertedInterval" or "DivisionByZero"; `offset` is a byte position in the
/// parsed input when one is meaningful.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& message, std::size_t offset = no_offset)
      : std::runtime_error(message), code_(std::move(code)), offset_(offset) {}

  const std::string& code() const noexcept { return code_; }
  std::size_t offset() const noexcept { return offset_; }
  bool has_offset() const noexcept { return offset_ != no_offset; }

private:
  std::string code_;
  std::size_t offset_;
};

enum class Severity { error, warning };

const char* to_string(Severity s) noexcept;

struct Location {
  std::string path;  // e.g. /instance/relations/relation[2]
  std::size_t offset = 0;
};

struct Diagnostic {
  Severity severity = Severity::error;
  std::string code;
  Location location;
  std::string message;
};

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept;

}  // namespace xcsp
