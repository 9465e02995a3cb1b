#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xcsp/cost.hpp"
#include "xcsp/expr.hpp"
#include "xcsp/lexparse.hpp"
#include "xcsp/param_value.hpp"

namespace xcsp {

/// letter-or-underscore followed by letters, digits, underscores.
bool is_identifier(std::string_view text) noexcept;

enum class InstanceType { csp, qcsp, qcsp_plus, wcsp };

std::string_view to_string(InstanceType t) noexcept;  // "CSP", "QCSP", "QCSP+", "WCSP"
std::optional<InstanceType> instance_type_from_string(std::string_view text) noexcept;

/// Value of minViolatedConstraints / nbSolutions: an integer, "at most k",
/// "at least k", or "?".
struct CountClaim {
  enum class Kind { exact, at_most, at_least, unknown };
  Kind kind = Kind::unknown;
  Int value = 0;

  std::string to_string() const;
  static std::optional<CountClaim> parse(std::string_view text);
  friend bool operator==(const CountClaim&, const CountClaim&) = default;
};

struct Presentation {
  std::optional<std::string> name;
  std::optional<Int> max_constraint_arity;
  std::optional<CountClaim> min_violated_constraints;
  std::optional<CountClaim> nb_solutions;
  std::optional<std::string> solution;
  std::optional<std::string> max_satisfiable_constraints;  // deprecated, kept verbatim
  std::optional<InstanceType> declared_type;
  std::string format = "XCSP 2.1";
  std::string description;
  std::vector<std::string> extensions;

  InstanceType type() const noexcept { return declared_type.value_or(InstanceType::csp); }
};

struct DomainDef {
  std::string name;
  std::vector<Int> values;         // sorted, deduplicated
  std::vector<DomainPiece> pieces; // as written
  std::vector<std::string> extensions;

  std::size_t size() const noexcept { return values.size(); }
  bool contains(Int v) const noexcept;
};

struct VariableDef {
  std::string name;
  std::string domain;
  std::vector<std::string> extensions;
};

enum class RelationSemantics { supports, conflicts, soft };

std::string_view to_string(RelationSemantics s) noexcept;

/// Extensional table. For soft relations `costs` runs parallel to `tuples`
/// and `default_cost` prices every unlisted tuple.
struct Relation {
  std::string name;
  int arity = 1;
  RelationSemantics semantics = RelationSemantics::supports;
  std::vector<Tuple> tuples;
  std::vector<Cost> costs;
  std::optional<Cost> default_cost;
  std::vector<std::string> extensions;

  bool soft() const noexcept { return semantics == RelationSemantics::soft; }
};

struct PredicateDef {
  std::string name;
  std::vector<FormalParam> formals;
  ExprPtr body;
  std::vector<std::string> other_representations;  // math/postfix/infix, kept verbatim
  std::vector<std::string> extensions;
};

struct CostFunctionDef {
  std::string name;
  std::string return_type = "int";
  std::vector<FormalParam> formals;
  ExprPtr body;
  std::vector<std::string> other_representations;
  std::vector<std::string> extensions;
};

struct ExtensionRef {
  friend bool operator==(ExtensionRef, ExtensionRef) noexcept { return true; }
};

struct IntensionParams {
  std::vector<EffectiveParam> params;
};

struct GlobalParams {
  std::vector<ParamValue> params;
};

using ConstraintBody = std::variant<ExtensionRef, IntensionParams, GlobalParams>;

struct ConstraintDef {
  std::string name;
  std::optional<int> declared_arity;  // attribute as written; arity() is authoritative
  std::vector<std::string> scope;
  std::string reference;
  ConstraintBody body;
  std::vector<std::string> extensions;

  int arity() const noexcept { return static_cast<int>(scope.size()); }
  bool is_global() const noexcept;
  /// Lower-cased global name without the "global:" prefix; empty otherwise.
  std::string global_name() const;
};

enum class Quantifier { exists, forall };

std::string_view to_string(Quantifier q) noexcept;

struct QuantBlock {
  Quantifier quantifier = Quantifier::exists;
  std::vector<std::string> scope;
  std::vector<ConstraintDef> restrictions;
  std::vector<std::string> extensions;
};

/// Sections that carry a count attribute and may hold solver extensions.
struct SectionExtensions {
  std::vector<std::string> domains, variables, relations, predicates, functions, constraints, quantification;
};

class Instance {
public:
  Presentation presentation;
  std::vector<DomainDef> domains;
  std::vector<VariableDef> variables;
  std::vector<Relation> relations;
  std::vector<PredicateDef> predicates;
  std::vector<CostFunctionDef> functions;
  std::vector<ConstraintDef> constraints;
  std::optional<Cost> maximal_cost;
  std::optional<Cost> initial_cost;
  std::optional<std::vector<QuantBlock>> quantification;
  std::vector<std::string> extensions;
  SectionExtensions section_extensions;

  InstanceType type() const noexcept { return presentation.type(); }
  Cost effective_initial_cost() const noexcept { return initial_cost.value_or(Cost(0)); }

  using Entity = std::variant<const DomainDef*, const VariableDef*, const Relation*, const PredicateDef*,
                              const CostFunctionDef*, const ConstraintDef*>;

  /// Named entity lookup; throws Error("UnknownName") when absent.
  Entity resolve(std::string_view name) const;

  const DomainDef* find_domain(std::string_view name) const noexcept;
  const VariableDef* find_variable(std::string_view name) const noexcept;
  const Relation* find_relation(std::string_view name) const noexcept;
  const PredicateDef* find_predicate(std::string_view name) const noexcept;
  const CostFunctionDef* find_function(std::string_view name) const noexcept;
  const ConstraintDef* find_constraint(std::string_view name) const noexcept;

  /// Domain of a declared variable; nullptr when either is missing.
  const DomainDef* domain_of(std::string_view variable) const noexcept;
};

/// Equality that ignores notation: compares expanded domain values, tuple
/// sequences, costs, expression trees, and parameter values up to dictionary
/// order, nil-vs-missing keys, and positional-vs-keyed origin. Returns a
/// description of the first difference, or nullopt when equal.
std::optional<std::string> first_difference(const Instance& a, const Instance& b);
inline bool model_equal(const Instance& a, const Instance& b) { return !first_difference(a, b); }

}  // namespace xcsp
