#include "xcsp/validate.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "json.hpp"

#include "xcsp/globals.hpp"

namespace xcsp {

namespace {

std::string indexed(std::string_view section, std::string_view item, std::size_t i) {
  return "/instance/" + std::string(section) + "/" + std::string(item) + "[" + std::to_string(i + 1) + "]";
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : " ") + s;
  return out;
}

std::string tuple_text(const Tuple& t) {
  std::vector<std::string> parts;
  for (Int v : t) parts.push_back(std::to_string(v));
  return join(parts);
}

class Collector {
public:
  std::vector<Diagnostic> diagnostics;

  void error(std::string code, std::string path, std::string message) {
    diagnostics.push_back({Severity::error, std::move(code), {std::move(path), 0}, std::move(message)});
  }
  void warning(std::string code, std::string path, std::string message) {
    diagnostics.push_back({Severity::warning, std::move(code), {std::move(path), 0}, std::move(message)});
  }
  void report(bool as_error, std::string code, std::string path, std::string message) {
    if (as_error)
      error(std::move(code), std::move(path), std::move(message));
    else
      warning(std::move(code), std::move(path), std::move(message));
  }
};

// A constraint together with where it lives, covering goal constraints
// and quantification restrictions alike.
struct ConstraintSite {
  const ConstraintDef* def;
  std::string path;
  int block = -1;  // index of the owning block for restrictions
};

std::vector<ConstraintSite> all_constraints(const Instance& inst) {
  std::vector<ConstraintSite> out;
  for (std::size_t i = 0; i < inst.constraints.size(); ++i)
    out.push_back({&inst.constraints[i], indexed("constraints", "constraint", i)});
  if (inst.quantification)
    for (std::size_t b = 0; b < inst.quantification->size(); ++b) {
      const auto& block = (*inst.quantification)[b];
      for (std::size_t i = 0; i < block.restrictions.size(); ++i)
        out.push_back({&block.restrictions[i],
                       indexed("quantification", "block", b) + "/constraint[" + std::to_string(i + 1) + "]",
                       static_cast<int>(b)});
    }
  return out;
}

const std::vector<FormalParam>* formals_of(const Instance& inst, std::string_view name) {
  if (auto* p = inst.find_predicate(name)) return &p->formals;
  if (auto* f = inst.find_function(name)) return &f->formals;
  return nullptr;
}

void check_constraint(const Instance& inst, const ConstraintSite& site, Collector& out) {
  const ConstraintDef& c = *site.def;
  const std::string& path = site.path;
  const bool wcsp = inst.type() == InstanceType::wcsp;

  std::set<std::string> seen;
  for (const auto& v : c.scope)
    if (!seen.insert(v).second) out.error("DuplicateScopeVariable", path, "variable " + v + " occurs twice in the scope");
  if (c.declared_arity && *c.declared_arity != c.arity())
    out.error("ArityAttributeMismatch", path,
              "arity attribute says " + std::to_string(*c.declared_arity) + " but the scope has " +
                  std::to_string(c.arity()) + " variables");

  if (std::holds_alternative<ExtensionRef>(c.body)) {
    const Relation* r = inst.find_relation(c.reference);
    if (!r) {
      out.error("UnknownReference", path, "relation " + c.reference + " is not defined");
      return;
    }
    if (r->arity != c.arity())
      out.error("ExtensionArityMismatch", path,
                "relation " + r->name + " has arity " + std::to_string(r->arity) + " but the scope has " +
                    std::to_string(c.arity()) + " variables");
    if (r->soft() && !wcsp)
      out.error("SoftRelationOutsideWcsp", path, "soft relation " + r->name + " used outside a WCSP instance");
    return;
  }

  if (const auto* ip = std::get_if<IntensionParams>(&c.body)) {
    const auto* formals = formals_of(inst, c.reference);
    if (!formals) {
      out.error("UnknownReference", path, c.reference + " is neither a predicate nor a function");
      return;
    }
    if (inst.find_function(c.reference) && !wcsp)
      out.error("FunctionOutsideWcsp", path, "cost function " + c.reference + " used outside a WCSP instance");
    if (ip->params.size() != formals->size())
      out.error("EffectiveParamCount", path,
                c.reference + " has " + std::to_string(formals->size()) + " formal parameters but " +
                    std::to_string(ip->params.size()) + " effective parameters are given");
    std::set<std::string> used;
    for (const auto& p : ip->params) {
      if (const auto* v = std::get_if<VarRef>(&p)) {
        used.insert(v->name);
        if (std::find(c.scope.begin(), c.scope.end(), v->name) == c.scope.end())
          out.error("ParamNotInScope", path, "effective parameter " + v->name + " is not in the scope");
      }
    }
    for (const auto& v : c.scope)
      if (!used.count(v)) out.error("ScopeNotCovered", path, "scope variable " + v + " is not an effective parameter");
    return;
  }

  const auto& gp = std::get<GlobalParams>(c.body);
  const std::string gname = c.global_name();
  if (const GlobalInfo* info = find_global(gname); info && info->competition)
    if (auto problem = check_signature(gname, gp.params))
      out.error("MalformedGlobalParams", path, "global:" + std::string(info->display) + ": " + *problem);
  const auto refs = referenced_variables(gp.params);
  for (const auto& v : refs) {
    if (!inst.find_variable(v))
      out.error("UnknownVariable", path, "parameter refers to undeclared variable " + v);
    else if (std::find(c.scope.begin(), c.scope.end(), v) == c.scope.end())
      out.error("ParamNotInScope", path, "parameter variable " + v + " is not in the scope");
  }
  for (const auto& v : c.scope)
    if (std::find(refs.begin(), refs.end(), v) == refs.end())
      out.warning("ScopeNotCovered", path, "scope variable " + v + " does not occur in the parameters");
}

template <class Def>
void check_callable(const Def& d, const std::string& path, ExprType expected, Collector& out) {
  if (!d.body) return;
  try {
    const ExprType t = typecheck(*d.body, d.formals);
    if (t != expected)
      out.error("TypeMismatch", path,
                d.name + " has a " + std::string(to_string(t)) + " body, expected " + std::string(to_string(expected)));
  } catch (const Error& e) {
    out.error(e.code(), path, d.name + ": " + e.what());
  }
}

void check_costs(const Instance& inst, Collector& out) {
  const bool wcsp = inst.type() == InstanceType::wcsp;
  if (!wcsp) {
    if (inst.maximal_cost || inst.initial_cost)
      out.warning("IgnoredAttribute", "/instance/constraints", "cost attributes only apply to WCSP instances");
    return;
  }
  if (!inst.maximal_cost) {
    out.error("MissingMaximalCost", "/instance/constraints", "a WCSP instance needs a maximalCost attribute");
    return;
  }
  const Cost k = *inst.maximal_cost;
  if (k == Cost(0)) {
    out.error("InvalidMaximalCost", "/instance/constraints", "maximalCost must be at least 1 or infinity");
    return;
  }
  if (k.is_infinite()) return;
  auto exceeds = [&](Cost c) { return c.is_finite() && c > k; };
  if (inst.initial_cost && exceeds(*inst.initial_cost))
    out.error("CostExceedsMaximal", "/instance/constraints", "initialCost exceeds maximalCost");
  for (std::size_t i = 0; i < inst.relations.size(); ++i) {
    const auto& r = inst.relations[i];
    if (!r.soft()) continue;
    const std::string path = indexed("relations", "relation", i);
    if (r.default_cost && exceeds(*r.default_cost))
      out.error("CostExceedsMaximal", path, "defaultCost " + r.default_cost->to_string() + " exceeds maximalCost");
    for (std::size_t t = 0; t < r.costs.size(); ++t)
      if (exceeds(r.costs[t])) {
        out.error("CostExceedsMaximal", path,
                  "tuple " + tuple_text(r.tuples[t]) + " costs " + r.costs[t].to_string() + ", above maximalCost");
        break;
      }
  }
}

void check_quantification(const Instance& inst, Collector& out) {
  const InstanceType type = inst.type();
  const bool quantified_type = type == InstanceType::qcsp || type == InstanceType::qcsp_plus;
  if (quantified_type != inst.quantification.has_value()) {
    out.error("QuantificationMismatch", "/instance",
              quantified_type ? "a quantified instance needs a <quantification> element"
                              : "<quantification> is only allowed in QCSP and QCSP+ instances");
  }
  if (!inst.quantification) return;
  const auto& blocks = *inst.quantification;
  std::map<std::string, std::size_t> block_of;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string path = indexed("quantification", "block", b);
    for (const auto& v : blocks[b].scope)
      if (!block_of.emplace(v, b).second)
        out.error("DuplicateQuantification", path, "variable " + v + " is quantified more than once");
  }
  for (const auto& v : inst.variables)
    if (!block_of.count(v.name))
      out.error("UnquantifiedVariable", "/instance/quantification", "variable " + v.name + " belongs to no block");
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string path = indexed("quantification", "block", b);
    if (!blocks[b].restrictions.empty() && type != InstanceType::qcsp_plus)
      out.error("RestrictionInPlainQcsp", path, "restrictions are only allowed in QCSP+ instances");
    for (const auto& c : blocks[b].restrictions)
      for (const auto& v : c.scope) {
        auto it = block_of.find(v);
        if (it != block_of.end() && it->second > b)
          out.error("RestrictionOrder", path,
                    "restriction " + c.name + " mentions " + v + ", which is quantified in a later block");
      }
  }
}

ValidationReport finish(std::vector<Diagnostic> diagnostics, bool strict) {
  ValidationReport r;
  r.diagnostics = std::move(diagnostics);
  r.strict = strict;
  r.passed = !has_errors(r.diagnostics);
  return r;
}

// -- competition ------------------------------------------------------------

bool has_prefix_index(std::string_view name, std::string_view prefix, std::size_t index) {
  return name == std::string(prefix) + std::to_string(index);
}

void check_naming(const Instance& inst, const CompetitionOptions& opt, Collector& out) {
  auto check = [&](const auto& items, std::string_view section, std::string_view item, std::string_view prefix) {
    for (std::size_t i = 0; i < items.size(); ++i)
      if (!has_prefix_index(items[i].name, prefix, i))
        out.report(opt.naming_as_errors, "NamingConvention", indexed(section, item, i),
                   std::string(item) + " " + items[i].name + " should be named " + std::string(prefix) +
                       std::to_string(i));
  };
  check(inst.domains, "domains", "domain", "D");
  check(inst.variables, "variables", "variable", "V");
  check(inst.relations, "relations", "relation", "R");
  check(inst.predicates, "predicates", "predicate", "P");
  check(inst.constraints, "constraints", "constraint", "C");
  for (std::size_t p = 0; p < inst.predicates.size(); ++p) {
    const auto& formals = inst.predicates[p].formals;
    for (std::size_t i = 0; i < formals.size(); ++i)
      if (!has_prefix_index(formals[i].name, "X", i))
        out.report(opt.naming_as_errors, "NamingConvention", indexed("predicates", "predicate", p) + "/parameters",
                   "formal parameter " + formals[i].name + " should be named X" + std::to_string(i));
  }
}

void check_domain_order(const Instance& inst, Collector& out) {
  for (std::size_t i = 0; i < inst.domains.size(); ++i) {
    const auto& pieces = inst.domains[i].pieces;
    for (std::size_t k = 1; k < pieces.size(); ++k) {
      const Int prev_max = pieces[k - 1].max;
      if (pieces[k].min > prev_max) continue;
      const bool overlaps = std::any_of(pieces.begin(), pieces.begin() + static_cast<std::ptrdiff_t>(k),
                                        [&](const DomainPiece& p) { return pieces[k].min <= p.max && p.min <= pieces[k].max; });
      if (overlaps)
        out.error("DuplicateDomainValue", indexed("domains", "domain", i),
                  "domain " + inst.domains[i].name + " lists a value more than once");
      else
        out.error("DomainNotAscending", indexed("domains", "domain", i),
                  "domain " + inst.domains[i].name + " values are not in ascending order");
      break;
    }
  }
}

void check_relations(const Instance& inst, Collector& out) {
  for (std::size_t i = 0; i < inst.relations.size(); ++i) {
    const auto& r = inst.relations[i];
    const std::string path = indexed("relations", "relation", i);
    if (r.tuples.empty()) out.error("EmptyRelation", path, "relation " + r.name + " has no tuples");
    for (std::size_t t = 1; t < r.tuples.size(); ++t) {
      if (r.tuples[t - 1] < r.tuples[t]) continue;
      if (r.tuples[t - 1] == r.tuples[t])
        out.error("DuplicateTuple", path, "relation " + r.name + " lists tuple " + tuple_text(r.tuples[t]) + " twice");
      else
        out.error("TuplesNotSorted", path,
                  "relation " + r.name + ": tuple " + tuple_text(r.tuples[t]) + " comes after " +
                      tuple_text(r.tuples[t - 1]));
      break;
    }
  }
}

void check_references(const Instance& inst, const std::vector<ConstraintSite>& sites, Collector& out) {
  std::set<std::string, std::less<>> used_domains, used_refs, constrained;
  for (const auto& v : inst.variables) used_domains.insert(v.domain);
  for (const auto& s : sites) {
    used_refs.insert(s.def->reference);
    constrained.insert(s.def->scope.begin(), s.def->scope.end());
  }
  for (std::size_t i = 0; i < inst.domains.size(); ++i)
    if (!used_domains.count(inst.domains[i].name))
      out.error("UnreferencedDomain", indexed("domains", "domain", i),
                "domain " + inst.domains[i].name + " is not used by any variable");
  for (std::size_t i = 0; i < inst.relations.size(); ++i)
    if (!used_refs.count(inst.relations[i].name))
      out.error("UnreferencedRelation", indexed("relations", "relation", i),
                "relation " + inst.relations[i].name + " is not used by any constraint");
  for (std::size_t i = 0; i < inst.predicates.size(); ++i)
    if (!used_refs.count(inst.predicates[i].name))
      out.error("UnreferencedPredicate", indexed("predicates", "predicate", i),
                "predicate " + inst.predicates[i].name + " is not used by any constraint");
  for (std::size_t i = 0; i < inst.variables.size(); ++i)
    if (!constrained.count(inst.variables[i].name))
      out.error("UnconstrainedVariable", indexed("variables", "variable", i),
                "variable " + inst.variables[i].name + " occurs in no constraint scope");
}

void check_constraint_order(const Instance& inst, const CompetitionOptions& opt, Collector& out) {
  for (std::size_t i = 1; i < inst.constraints.size(); ++i) {
    const auto prev = normalized_scope(inst.constraints[i - 1].scope);
    const auto cur = normalized_scope(inst.constraints[i].scope);
    if (cur < prev) {
      out.error("ConstraintsNotSorted", indexed("constraints", "constraint", i),
                "constraint " + inst.constraints[i].name + " (" + join(cur) + ") comes after " +
                    inst.constraints[i - 1].name + " (" + join(prev) + ")");
      break;
    }
  }
  if (!opt.suggest_merges) return;
  for (std::size_t i = 1; i < inst.constraints.size(); ++i)
    if (normalized_scope(inst.constraints[i - 1].scope) == normalized_scope(inst.constraints[i].scope))
      out.warning("MergeableConstraints", indexed("constraints", "constraint", i),
                  inst.constraints[i - 1].name + " and " + inst.constraints[i].name +
                      " share a scope and could be merged with a logical and");
}

void check_competition_constraint(const Instance& inst, const ConstraintSite& site, Collector& out) {
  const ConstraintDef& c = *site.def;
  if (std::holds_alternative<ExtensionRef>(c.body)) {
    const Relation* r = inst.find_relation(c.reference);
    if (!r || r->arity != c.arity()) return;
    for (const auto& t : r->tuples)
      for (std::size_t k = 0; k < t.size(); ++k) {
        const DomainDef* d = inst.domain_of(c.scope[k]);
        if (d && !d->contains(t[k])) {
          out.error("TupleOutOfDomain", site.path,
                    "tuple " + tuple_text(t) + " of " + r->name + " puts " + std::to_string(t[k]) + " outside the domain of " +
                        c.scope[k]);
          return;
        }
      }
    return;
  }
  const auto* gp = std::get_if<GlobalParams>(&c.body);
  if (!gp) return;
  const std::string gname = c.global_name();
  const GlobalInfo* info = find_global(gname);
  if (!info || !info->competition) {
    out.error("NonCompetitionGlobal", site.path, "global:" + gname + " is not one of the competition globals");
    return;
  }
  if (gname == "alldifferent") {
    if (!gp->params.empty() && gp->params[0].is_list())
      for (const auto& item : gp->params[0].as_list().items)
        if (item.is_int()) {
          out.error("AllDifferentConstant", site.path,
                    "allDifferent parameter " + std::to_string(item.as_int()) + " is a constant");
          break;
        }
  } else if (gname == "weightedsum") {
    if (gp->params.empty() || !gp->params[0].is_list()) return;
    std::set<std::string> vars;
    for (const auto& item : gp->params[0].as_list().items) {
      if (!item.is_dict()) continue;
      const ParamValue* coef = item.as_dict().find("coef");
      const ParamValue* var = item.as_dict().find("var");
      if (coef && coef->is_int() && coef->as_int() == 0)
        out.error("WeightedSumZeroCoef", site.path, "weightedSum has a zero coefficient");
      if (var && var->is_var()) {
        const auto& name = var->as_var().name;
        if (!vars.insert(name).second)
          out.error("WeightedSumDuplicateVar", site.path, "weightedSum mentions " + name + " twice");
        if (std::find(c.scope.begin(), c.scope.end(), name) == c.scope.end())
          out.error("WeightedSumVarNotInScope", site.path, "weightedSum variable " + name + " is not in the scope");
      } else if (var) {
        out.error("WeightedSumVarNotInScope", site.path, "weightedSum term " + to_string(*var) + " is not a variable");
      }
    }
  }
}

}  // namespace

std::vector<std::string> normalized_scope(const std::vector<std::string>& scope) {
  auto out = scope;
  std::sort(out.begin(), out.end());
  return out;
}

ValidationReport validate_structure(const Instance& inst) {
  Collector out;
  for (const auto& site : all_constraints(inst)) check_constraint(inst, site, out);
  for (std::size_t i = 0; i < inst.predicates.size(); ++i)
    check_callable(inst.predicates[i], indexed("predicates", "predicate", i), ExprType::boolean, out);
  for (std::size_t i = 0; i < inst.functions.size(); ++i)
    check_callable(inst.functions[i], indexed("functions", "function", i), ExprType::integer, out);
  check_costs(inst, out);
  check_quantification(inst, out);
  return finish(std::move(out.diagnostics), false);
}

ValidationReport validate_competition(const Instance& inst, CompetitionOptions options) {
  Collector out;
  out.diagnostics = validate_structure(inst).diagnostics;
  const auto sites = all_constraints(inst);

  check_naming(inst, options, out);

  const auto& p = inst.presentation;
  if (p.name || p.min_violated_constraints || p.nb_solutions || p.solution || p.max_satisfiable_constraints ||
      !p.description.empty() || !p.extensions.empty())
    out.warning("PresentationNotCompetition", "/instance/presentation",
                "competition presentations carry only maxConstraintArity, format and type, with no content");

  check_domain_order(inst, out);
  check_relations(inst, out);
  check_references(inst, sites, out);
  check_constraint_order(inst, options, out);
  for (const auto& site : sites) check_competition_constraint(inst, site, out);

  for (std::size_t i = 0; i < inst.predicates.size(); ++i) {
    const auto& d = inst.predicates[i];
    if (!d.body) continue;
    try {
      typecheck(*d.body, d.formals, TypecheckOptions{true});
    } catch (const Error& e) {
      if (e.code() == "UnusedParameter")
        out.error("UnusedFormalParameter", indexed("predicates", "predicate", i), d.name + ": " + e.what());
    }
  }

  if (inst.type() == InstanceType::wcsp) {
    if (inst.maximal_cost && inst.maximal_cost->is_infinite())
      out.error("MaximalCostInfinite", "/instance/constraints", "competition WCSP instances need a finite maximalCost");
    if (inst.initial_cost)
      out.error("InitialCostPresent", "/instance/constraints", "competition WCSP instances carry no initialCost");
    if (!inst.functions.empty())
      out.error("FunctionsPresent", "/instance/functions", "competition instances do not use cost functions");
  }
  return finish(std::move(out.diagnostics), true);
}

std::string format_text(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics)
    out += std::string(to_string(d.severity)) + " " + d.code + " " + d.location.path + " @" +
           std::to_string(d.location.offset) + ": " + d.message + "\n";
  return out;
}

std::string format_json_lines(const std::vector<Diagnostic>& diagnostics) {
  std::string out;
  for (const auto& d : diagnostics) {
    nlohmann::ordered_json j;
    j["severity"] = to_string(d.severity);
    j["code"] = d.code;
    j["path"] = d.location.path;
    j["offset"] = d.location.offset;
    j["message"] = d.message;
    out += j.dump() + "\n";
  }
  return out;
}

}  // namespace xcsp
