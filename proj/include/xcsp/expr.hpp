#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xcsp/cost.hpp"

namespace xcsp {

enum class ExprOp {
  int_const, bool_const, param,
  // integer -> integer
  neg, abs, add, sub, mul, div, mod, pow, min, max,
  // boolean -> boolean
  not_, and_, or_, xor_, iff,
  // integer -> boolean
  eq, ne, ge, gt, le, lt,
  // boolean, integer, integer -> integer
  if_,
};

enum class ExprType { integer, boolean };

std::string_view to_string(ExprOp op) noexcept;
std::string_view to_string(ExprType t) noexcept;

/// Names of the functional operators plus the Boolean constants; none of
/// them may be used as a formal parameter name.
bool is_reserved_identifier(std::string_view name) noexcept;

struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

/// Node of the functional expression language. Immutable once built.
struct ExprNode {
  ExprOp op = ExprOp::int_const;
  Int value = 0;            // int_const; bool_const uses 0/1
  std::string name;         // param
  int slot = -1;            // param: index into the formal list, -1 until bound
  std::size_t offset = 0;   // position in the source text
  std::vector<ExprPtr> children;

  ExprType type() const noexcept;
};

struct FormalParam {
  std::string type = "int";
  std::string name;
  friend bool operator==(const FormalParam&, const FormalParam&) = default;
};

/// Parses the functional notation, e.g. "and(ne(X,Y),ne(abs(sub(X,Y)),Z))".
/// Arity and child typing are enforced while parsing.
ExprPtr parse_functional(std::string_view text);

/// Canonical functional rendering without whitespace.
std::string print_functional(const ExprNode& node);

struct TypecheckOptions {
  /// Competition rule: each formal parameter occurs at least once.
  bool require_all_formals_used = false;
};

ExprType typecheck(const ExprNode& node, std::span<const FormalParam> formals,
                   TypecheckOptions options = {});

/// Copy of `node` with every parameter reference resolved to its index in
/// `formals`, for evaluation over a positional binding vector.
ExprPtr bind_slots(const ExprPtr& node, std::span<const FormalParam> formals);

bool structurally_equal(const ExprNode& a, const ExprNode& b) noexcept;

using ExprValue = std::variant<Int, bool>;

ExprValue evaluate(const ExprNode& node, const std::map<std::string, Int, std::less<>>& bindings);
/// Requires bind_slots; `slots[i]` is the value of formal i.
ExprValue evaluate(const ExprNode& node, std::span<const Int> slots);

// Single home of the integer division convention: truncation toward zero,
// remainder carries the dividend's sign. Both throw DivisionByZero.
Int int_div(Int a, Int b);
Int int_mod(Int a, Int b);
Int int_pow(Int base, Int exponent);

}  // namespace xcsp
