#include "xcsp/model.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>

#include "xcsp/error.hpp"

namespace xcsp {

bool is_identifier(std::string_view text) noexcept {
  if (text.empty()) return false;
  auto start = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!start(text.front())) return false;
  return std::all_of(text.begin() + 1, text.end(), [&](char c) { return start(c) || (c >= '0' && c <= '9'); });
}

std::string_view to_string(InstanceType t) noexcept {
  switch (t) {
    case InstanceType::csp: return "CSP";
    case InstanceType::qcsp: return "QCSP";
    case InstanceType::qcsp_plus: return "QCSP+";
    case InstanceType::wcsp: return "WCSP";
  }
  return "CSP";
}

std::optional<InstanceType> instance_type_from_string(std::string_view text) noexcept {
  if (text == "CSP") return InstanceType::csp;
  if (text == "QCSP") return InstanceType::qcsp;
  if (text == "QCSP+") return InstanceType::qcsp_plus;
  if (text == "WCSP") return InstanceType::wcsp;
  return std::nullopt;
}

std::string CountClaim::to_string() const {
  switch (kind) {
    case Kind::exact: return std::to_string(value);
    case Kind::at_most: return "at most " + std::to_string(value);
    case Kind::at_least: return "at least " + std::to_string(value);
    case Kind::unknown: return "?";
  }
  return "?";
}

std::optional<CountClaim> CountClaim::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  auto number = [](std::string_view s) -> std::optional<Int> {
    Int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || v < 0) return std::nullopt;
    return v;
  };
  text = trim(text);
  if (text == "?") return CountClaim{};
  for (auto [prefix, kind] : {std::pair{std::string_view("at most"), Kind::at_most},
                              std::pair{std::string_view("at least"), Kind::at_least}}) {
    if (text.substr(0, prefix.size()) == prefix) {
      auto v = number(trim(text.substr(prefix.size())));
      if (!v) return std::nullopt;
      return CountClaim{kind, *v};
    }
  }
  auto v = number(text);
  if (!v) return std::nullopt;
  return CountClaim{Kind::exact, *v};
}

bool DomainDef::contains(Int v) const noexcept {
  return std::binary_search(values.begin(), values.end(), v);
}

std::string_view to_string(RelationSemantics s) noexcept {
  switch (s) {
    case RelationSemantics::supports: return "supports";
    case RelationSemantics::conflicts: return "conflicts";
    case RelationSemantics::soft: return "soft";
  }
  return "supports";
}

std::string_view to_string(Quantifier q) noexcept {
  return q == Quantifier::exists ? "exists" : "forall";
}

bool ConstraintDef::is_global() const noexcept {
  if (reference.size() < 7) return false;
  std::string prefix = reference.substr(0, 7);
  std::transform(prefix.begin(), prefix.end(), prefix.begin(), [](unsigned char c) { return std::tolower(c); });
  return prefix == "global:";
}

std::string ConstraintDef::global_name() const {
  if (!is_global()) return {};
  std::string name = reference.substr(7);
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::tolower(c); });
  return name;
}

namespace {

template <class T>
const T* find_named(const std::vector<T>& items, std::string_view name) noexcept {
  for (const auto& item : items)
    if (item.name == name) return &item;
  return nullptr;
}

}  // namespace

const DomainDef* Instance::find_domain(std::string_view name) const noexcept { return find_named(domains, name); }
const VariableDef* Instance::find_variable(std::string_view name) const noexcept {
  return find_named(variables, name);
}
const Relation* Instance::find_relation(std::string_view name) const noexcept { return find_named(relations, name); }
const PredicateDef* Instance::find_predicate(std::string_view name) const noexcept {
  return find_named(predicates, name);
}
const CostFunctionDef* Instance::find_function(std::string_view name) const noexcept {
  return find_named(functions, name);
}
const ConstraintDef* Instance::find_constraint(std::string_view name) const noexcept {
  if (auto* c = find_named(constraints, name)) return c;
  if (quantification)
    for (const auto& block : *quantification)
      if (auto* c = find_named(block.restrictions, name)) return c;
  return nullptr;
}

const DomainDef* Instance::domain_of(std::string_view variable) const noexcept {
  const auto* v = find_variable(variable);
  return v ? find_domain(v->domain) : nullptr;
}

Instance::Entity Instance::resolve(std::string_view name) const {
  if (auto* d = find_domain(name)) return d;
  if (auto* v = find_variable(name)) return v;
  if (auto* r = find_relation(name)) return r;
  if (auto* p = find_predicate(name)) return p;
  if (auto* f = find_function(name)) return f;
  if (auto* c = find_constraint(name)) return c;
  throw Error("UnknownName", "no entity named '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Model equality

namespace {

class Differ {
public:
  std::optional<std::string> result;

  bool fail(std::string what) {
    if (!result) result = std::move(what);
    return false;
  }

  template <class T>
  bool same(const T& a, const T& b, const std::string& what) {
    return a == b || fail(what);
  }

  bool presentation(const Presentation& a, const Presentation& b) {
    return same(a.name, b.name, "presentation name") &&
           same(a.max_constraint_arity, b.max_constraint_arity, "maxConstraintArity") &&
           same(a.min_violated_constraints, b.min_violated_constraints, "minViolatedConstraints") &&
           same(a.nb_solutions, b.nb_solutions, "nbSolutions") && same(a.solution, b.solution, "solution") &&
           same(a.max_satisfiable_constraints, b.max_satisfiable_constraints, "maxSatisfiableConstraints") &&
           same(a.type(), b.type(), "instance type") && same(a.format, b.format, "format") &&
           same(a.description, b.description, "description") && same(a.extensions, b.extensions, "presentation extensions");
  }

  bool formals_and_body(const std::vector<FormalParam>& fa, const ExprPtr& ba, const std::vector<FormalParam>& fb,
                        const ExprPtr& bb, const std::string& where) {
    if (!same(fa, fb, where + " formal parameters")) return false;
    if (!ba || !bb) return same(bool(ba), bool(bb), where + " expression");
    return structurally_equal(*ba, *bb) || fail(where + " expression");
  }

  bool constraint(const ConstraintDef& a, const ConstraintDef& b) {
    const std::string where = "constraint " + a.name;
    if (!same(a.name, b.name, "constraint name " + a.name + " vs " + b.name) || !same(a.scope, b.scope, where + " scope") ||
        !same(a.reference, b.reference, where + " reference") || !same(a.extensions, b.extensions, where + " extensions"))
      return false;
    if (a.body.index() != b.body.index()) return fail(where + " body kind");
    if (auto* ia = std::get_if<IntensionParams>(&a.body))
      return same(ia->params, std::get<IntensionParams>(b.body).params, where + " effective parameters");
    if (auto* ga = std::get_if<GlobalParams>(&a.body))
      return equivalent(ga->params, std::get<GlobalParams>(b.body).params) || fail(where + " global parameters");
    return true;
  }

  bool constraints(const std::vector<ConstraintDef>& a, const std::vector<ConstraintDef>& b, const std::string& where) {
    if (a.size() != b.size()) return fail(where + " count");
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!constraint(a[i], b[i])) return false;
    return true;
  }

  bool instance(const Instance& a, const Instance& b) {
    if (!presentation(a.presentation, b.presentation)) return false;

    if (a.domains.size() != b.domains.size()) return fail("domain count");
    for (std::size_t i = 0; i < a.domains.size(); ++i) {
      const auto &x = a.domains[i], &y = b.domains[i];
      if (!same(x.name, y.name, "domain name") || !same(x.values, y.values, "domain " + x.name + " values") ||
          !same(x.extensions, y.extensions, "domain " + x.name + " extensions"))
        return false;
    }

    if (a.variables.size() != b.variables.size()) return fail("variable count");
    for (std::size_t i = 0; i < a.variables.size(); ++i) {
      const auto &x = a.variables[i], &y = b.variables[i];
      if (!same(x.name, y.name, "variable name") || !same(x.domain, y.domain, "variable " + x.name + " domain") ||
          !same(x.extensions, y.extensions, "variable " + x.name + " extensions"))
        return false;
    }

    if (a.relations.size() != b.relations.size()) return fail("relation count");
    for (std::size_t i = 0; i < a.relations.size(); ++i) {
      const auto &x = a.relations[i], &y = b.relations[i];
      const std::string where = "relation " + x.name;
      if (!same(x.name, y.name, "relation name") || !same(x.arity, y.arity, where + " arity") ||
          !same(x.semantics, y.semantics, where + " semantics") || !same(x.tuples, y.tuples, where + " tuples") ||
          !same(x.costs, y.costs, where + " costs") || !same(x.default_cost, y.default_cost, where + " defaultCost") ||
          !same(x.extensions, y.extensions, where + " extensions"))
        return false;
    }

    if (a.predicates.size() != b.predicates.size()) return fail("predicate count");
    for (std::size_t i = 0; i < a.predicates.size(); ++i) {
      const auto &x = a.predicates[i], &y = b.predicates[i];
      if (!same(x.name, y.name, "predicate name") ||
          !formals_and_body(x.formals, x.body, y.formals, y.body, "predicate " + x.name) ||
          !same(x.other_representations, y.other_representations, "predicate " + x.name + " representations") ||
          !same(x.extensions, y.extensions, "predicate " + x.name + " extensions"))
        return false;
    }

    if (a.functions.size() != b.functions.size()) return fail("function count");
    for (std::size_t i = 0; i < a.functions.size(); ++i) {
      const auto &x = a.functions[i], &y = b.functions[i];
      if (!same(x.name, y.name, "function name") || !same(x.return_type, y.return_type, "function return type") ||
          !formals_and_body(x.formals, x.body, y.formals, y.body, "function " + x.name) ||
          !same(x.other_representations, y.other_representations, "function " + x.name + " representations") ||
          !same(x.extensions, y.extensions, "function " + x.name + " extensions"))
        return false;
    }

    if (!constraints(a.constraints, b.constraints, "constraints")) return false;
    if (!same(a.maximal_cost, b.maximal_cost, "maximalCost") || !same(a.initial_cost, b.initial_cost, "initialCost"))
      return false;

    if (a.quantification.has_value() != b.quantification.has_value()) return fail("quantification presence");
    if (a.quantification) {
      const auto &qa = *a.quantification, &qb = *b.quantification;
      if (qa.size() != qb.size()) return fail("block count");
      for (std::size_t i = 0; i < qa.size(); ++i) {
        const std::string where = "block " + std::to_string(i);
        if (!same(qa[i].quantifier, qb[i].quantifier, where + " quantifier") ||
            !same(qa[i].scope, qb[i].scope, where + " scope") ||
            !constraints(qa[i].restrictions, qb[i].restrictions, where + " restrictions") ||
            !same(qa[i].extensions, qb[i].extensions, where + " extensions"))
          return false;
      }
    }

    const auto &sa = a.section_extensions, &sb = b.section_extensions;
    return same(a.extensions, b.extensions, "instance extensions") &&
           same(sa.domains, sb.domains, "domains extensions") && same(sa.variables, sb.variables, "variables extensions") &&
           same(sa.relations, sb.relations, "relations extensions") &&
           same(sa.predicates, sb.predicates, "predicates extensions") &&
           same(sa.functions, sb.functions, "functions extensions") &&
           same(sa.constraints, sb.constraints, "constraints extensions") &&
           same(sa.quantification, sb.quantification, "quantification extensions");
  }
};

}  // namespace

std::optional<std::string> first_difference(const Instance& a, const Instance& b) {
  Differ d;
  d.instance(a, b);
  return d.result;
}

}  // namespace xcsp
