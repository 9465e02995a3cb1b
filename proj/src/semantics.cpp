#include "xcsp/semantics.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>
#include <variant>

#include "xcsp/globals.hpp"

namespace xcsp {

namespace {

// A parameter that is either a constant or a variable read.
struct Operand {
  int var = -1;
  Int value = 0;

  Int get(std::span<const Int> values) const { return var < 0 ? value : values[static_cast<std::size_t>(var)]; }
};

struct AllDifferent {
  std::vector<Operand> items;
};

struct WeightedSum {
  std::vector<std::pair<Int, Operand>> terms;
  RelOp op = RelOp::eq;
  Int bound = 0;
};

struct Element {
  Operand index;
  std::vector<Operand> table;
  Operand value;
};

struct Task {
  std::optional<Operand> origin, duration, end;
  Operand height;
};

struct Cumulative {
  std::vector<Task> tasks;
  Operand limit;
};

using GlobalImpl = std::variant<AllDifferent, WeightedSum, Element, Cumulative>;

struct ExtensionImpl {
  const Relation* relation = nullptr;
  std::vector<std::pair<Tuple, Cost>> table;  // sorted by tuple
};

struct IntensionImpl {
  ExprPtr body;  // slot-bound
  std::vector<Operand> args;
  bool function = false;
};

struct Compiled {
  const ConstraintDef* def = nullptr;
  std::vector<int> scope;
  std::vector<int> reads;  // every variable index read, deduplicated
  int last = -1;
  std::variant<ExtensionImpl, IntensionImpl, GlobalImpl> impl;
};

using Resolver = std::function<int(const std::string&)>;

Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error("ArithmeticOverflow", "product overflows 64-bit integers");
  return r;
}

Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Error("ArithmeticOverflow", "sum overflows 64-bit integers");
  return r;
}

Operand operand(const ParamValue& v, const Resolver& resolve) {
  if (v.is_int()) return Operand{-1, v.as_int()};
  return Operand{resolve(v.as_var().name), 0};
}

std::optional<Operand> optional_operand(const ParamDict& d, std::string_view key, const Resolver& resolve) {
  const ParamValue* v = d.find(key);
  if (!v || v->is_nil()) return std::nullopt;
  return operand(*v, resolve);
}

GlobalImpl compile_global(std::string_view name, std::span<const ParamValue> params, const Resolver& resolve) {
  std::string key(name);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::tolower(c); });
  const GlobalInfo* info = find_global(key);
  if (!info || !info->competition)
    throw Error("UnsupportedGlobal", "no built-in semantics for global:" + std::string(name));
  if (auto problem = check_signature(key, params))
    throw Error("MalformedParams", "global:" + std::string(info->display) + ": " + *problem);

  if (key == "alldifferent") {
    AllDifferent g;
    for (const auto& item : params[0].as_list().items) g.items.push_back(operand(item, resolve));
    return g;
  }
  if (key == "weightedsum") {
    WeightedSum g;
    for (const auto& item : params[0].as_list().items) {
      const auto& d = item.as_dict();
      g.terms.emplace_back(d.find("coef")->as_int(), operand(*d.find("var"), resolve));
    }
    g.op = params[1].as_atom();
    g.bound = params[2].as_int();
    return g;
  }
  if (key == "element") {
    Element g;
    g.index = operand(params[0], resolve);
    for (const auto& item : params[1].as_list().items) g.table.push_back(operand(item, resolve));
    g.value = operand(params[2], resolve);
    return g;
  }
  Cumulative g;
  for (const auto& item : params[0].as_list().items) {
    const auto& d = item.as_dict();
    g.tasks.push_back(Task{optional_operand(d, "origin", resolve), optional_operand(d, "duration", resolve),
                           optional_operand(d, "end", resolve), operand(*d.find("height"), resolve)});
  }
  g.limit = operand(params[1], resolve);
  return g;
}

bool eval_global_impl(const GlobalImpl& g, std::span<const Int> values) {
  if (const auto* a = std::get_if<AllDifferent>(&g)) {
    std::vector<Int> seen;
    seen.reserve(a->items.size());
    for (const auto& o : a->items) seen.push_back(o.get(values));
    std::sort(seen.begin(), seen.end());
    return std::adjacent_find(seen.begin(), seen.end()) == seen.end();
  }
  if (const auto* w = std::get_if<WeightedSum>(&g)) {
    Int sum = 0;
    for (const auto& [k, o] : w->terms) sum = checked_add(sum, checked_mul(k, o.get(values)));
    return compare(sum, w->op, w->bound);
  }
  if (const auto* e = std::get_if<Element>(&g)) {
    const Int i = e->index.get(values);
    if (i < 1 || i > static_cast<Int>(e->table.size())) return false;
    return e->table[static_cast<std::size_t>(i - 1)].get(values) == e->value.get(values);
  }
  const auto& c = std::get<Cumulative>(g);
  struct Span {
    Int start, end, height;
  };
  std::vector<Span> spans;
  for (const auto& t : c.tasks) {
    Int o, d, e;
    if (t.origin && t.duration && t.end) {
      o = t.origin->get(values);
      d = t.duration->get(values);
      e = t.end->get(values);
      if (checked_add(o, d) != e)
        throw Error("InconsistentTask", "task with origin " + std::to_string(o) + ", duration " + std::to_string(d) +
                                            " and end " + std::to_string(e) + " does not satisfy origin+duration=end");
    } else if (!t.end) {
      o = t.origin->get(values);
      d = t.duration->get(values);
      e = checked_add(o, d);
    } else if (!t.duration) {
      o = t.origin->get(values);
      e = t.end->get(values);
      d = checked_add(e, -o);
    } else {
      d = t.duration->get(values);
      e = t.end->get(values);
      o = checked_add(e, -d);
    }
    const Int h = t.height.get(values);
    if (d < 0 || h < 0) return false;
    if (d > 0) spans.push_back({o, e, h});
  }
  const Int limit = c.limit.get(values);
  // The profile only rises at task origins, so those are the points to test.
  for (const auto& s : spans) {
    Int load = 0;
    for (const auto& other : spans)
      if (other.start <= s.start && s.start < other.end) load = checked_add(load, other.height);
    if (load > limit) return false;
  }
  return true;
}

void collect_reads(const Operand& o, std::vector<int>& reads) {
  if (o.var >= 0) reads.push_back(o.var);
}

std::vector<int> global_reads(const GlobalImpl& g) {
  std::vector<int> reads;
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, AllDifferent>) {
          for (const auto& o : x.items) collect_reads(o, reads);
        } else if constexpr (std::is_same_v<T, WeightedSum>) {
          for (const auto& t : x.terms) collect_reads(t.second, reads);
        } else if constexpr (std::is_same_v<T, Element>) {
          collect_reads(x.index, reads);
          for (const auto& o : x.table) collect_reads(o, reads);
          collect_reads(x.value, reads);
        } else {
          for (const auto& t : x.tasks) {
            for (const auto* o : {&t.origin, &t.duration, &t.end})
              if (*o) collect_reads(**o, reads);
            collect_reads(t.height, reads);
          }
          collect_reads(x.limit, reads);
        }
      },
      g);
  return reads;
}

bool less_key(const std::pair<Tuple, Cost>& entry, std::span<const Int> key) {
  return std::lexicographical_compare(entry.first.begin(), entry.first.end(), key.begin(), key.end());
}

}  // namespace

struct Evaluator::Impl {
  const Instance* inst = nullptr;
  std::unordered_map<std::string, int> index;
  std::vector<std::span<const Int>> domains;
  std::vector<Compiled> constraints;
  std::vector<std::vector<Compiled>> restrictions;
  std::optional<Valuation> valuation;

  explicit Impl(const Instance& instance) : inst(&instance) {
    for (std::size_t i = 0; i < instance.variables.size(); ++i) {
      const auto& v = instance.variables[i];
      index.emplace(v.name, static_cast<int>(i));
      const DomainDef* d = instance.find_domain(v.domain);
      if (!d) throw Error("UnknownDomain", "variable " + v.name + " has no domain " + v.domain);
      domains.emplace_back(d->values);
    }
    if (instance.type() == InstanceType::wcsp && instance.maximal_cost)
      valuation.emplace(*instance.maximal_cost);
    for (const auto& c : instance.constraints) constraints.push_back(compile(c));
    if (instance.quantification)
      for (const auto& b : *instance.quantification) {
        restrictions.emplace_back();
        for (const auto& c : b.restrictions) restrictions.back().push_back(compile(c));
      }
  }

  int resolve(const std::string& name) const {
    auto it = index.find(name);
    if (it == index.end()) throw Error("UnknownVariable", "variable " + name + " is not declared");
    return it->second;
  }

  Compiled compile(const ConstraintDef& c) const {
    Compiled out;
    out.def = &c;
    for (const auto& v : c.scope) out.scope.push_back(resolve(v));
    out.reads = out.scope;
    const Resolver resolver = [this](const std::string& n) { return resolve(n); };

    if (std::holds_alternative<ExtensionRef>(c.body)) {
      ExtensionImpl e;
      e.relation = inst->find_relation(c.reference);
      if (!e.relation) throw Error("UnknownReference", "relation " + c.reference + " is not defined");
      if (e.relation->arity != c.arity())
        throw Error("ExtensionArityMismatch", "relation " + e.relation->name + " does not match the scope of " + c.name);
      for (std::size_t i = 0; i < e.relation->tuples.size(); ++i)
        e.table.emplace_back(e.relation->tuples[i], e.relation->soft() ? e.relation->costs[i] : Cost(0));
      std::stable_sort(e.table.begin(), e.table.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      out.impl = std::move(e);
    } else if (const auto* ip = std::get_if<IntensionParams>(&c.body)) {
      IntensionImpl e;
      const std::vector<FormalParam>* formals = nullptr;
      ExprPtr body;
      if (const auto* p = inst->find_predicate(c.reference)) {
        formals = &p->formals;
        body = p->body;
      } else if (const auto* f = inst->find_function(c.reference)) {
        formals = &f->formals;
        body = f->body;
        e.function = true;
      } else {
        throw Error("UnknownReference", c.reference + " is neither a predicate nor a function");
      }
      if (!body) throw Error("MissingFunctional", c.reference + " has no functional expression");
      if (ip->params.size() != formals->size())
        throw Error("EffectiveParamCount", "constraint " + c.name + " passes " + std::to_string(ip->params.size()) +
                                               " parameters to " + c.reference);
      e.body = bind_slots(body, *formals);
      for (const auto& p : ip->params) {
        if (const auto* v = std::get_if<Int>(&p))
          e.args.push_back(Operand{-1, *v});
        else
          e.args.push_back(Operand{resolve(std::get<VarRef>(p).name), 0});
        collect_reads(e.args.back(), out.reads);
      }
      out.impl = std::move(e);
    } else {
      auto g = compile_global(c.global_name(), std::get<GlobalParams>(c.body).params, resolver);
      auto reads = global_reads(g);
      out.reads.insert(out.reads.end(), reads.begin(), reads.end());
      out.impl = std::move(g);
    }
    std::sort(out.reads.begin(), out.reads.end());
    out.reads.erase(std::unique(out.reads.begin(), out.reads.end()), out.reads.end());
    out.last = out.reads.empty() ? -1 : out.reads.back();
    return out;
  }

  const Valuation& val() const {
    if (!valuation) throw Error("NotWeighted", "costs need a WCSP instance with a maximalCost");
    return *valuation;
  }

  // Cost of a listed tuple, or nullopt when absent from the table.
  static std::optional<Cost> lookup(const ExtensionImpl& e, const Compiled& c, std::span<const Int> values) {
    Int buffer[16];
    std::vector<Int> heap;
    Int* key = buffer;
    if (c.scope.size() > 16) {
      heap.resize(c.scope.size());
      key = heap.data();
    }
    for (std::size_t i = 0; i < c.scope.size(); ++i) key[i] = values[static_cast<std::size_t>(c.scope[i])];
    std::span<const Int> k(key, c.scope.size());
    auto it = std::lower_bound(e.table.begin(), e.table.end(), k, less_key);
    if (it == e.table.end() || !std::equal(it->first.begin(), it->first.end(), k.begin(), k.end())) return std::nullopt;
    return it->second;
  }

  static void fill_slots(const IntensionImpl& e, std::span<const Int> values, std::vector<Int>& slots) {
    slots.clear();
    for (const auto& a : e.args) slots.push_back(a.get(values));
  }

  bool check(const Compiled& c, std::span<const Int> values) const {
    if (const auto* e = std::get_if<ExtensionImpl>(&c.impl)) {
      auto found = lookup(*e, c, values);
      switch (e->relation->semantics) {
        case RelationSemantics::supports: return found.has_value();
        case RelationSemantics::conflicts: return !found.has_value();
        case RelationSemantics::soft: return val().consistent(val().clamp(found ? *found : *e->relation->default_cost));
      }
    }
    if (const auto* e = std::get_if<IntensionImpl>(&c.impl)) {
      std::vector<Int> slots;
      fill_slots(*e, values, slots);
      if (e->function) return val().consistent(function_cost(*e, slots));
      return std::get<bool>(evaluate(*e->body, std::span<const Int>(slots)));
    }
    return eval_global_impl(std::get<GlobalImpl>(c.impl), values);
  }

  Cost function_cost(const IntensionImpl& e, std::span<const Int> slots) const {
    const Int v = std::get<Int>(evaluate(*e.body, slots));
    if (v < 0) throw Error("NegativeFunctionCost", "cost function returned " + std::to_string(v));
    return val().clamp(Cost(v));
  }

  Cost cost(const Compiled& c, std::span<const Int> values) const {
    const Valuation& v = val();
    if (const auto* e = std::get_if<ExtensionImpl>(&c.impl); e && e->relation->soft()) {
      auto found = lookup(*e, c, values);
      return v.clamp(found ? *found : *e->relation->default_cost);
    }
    if (const auto* e = std::get_if<IntensionImpl>(&c.impl); e && e->function) {
      std::vector<Int> slots;
      fill_slots(*e, values, slots);
      return function_cost(*e, slots);
    }
    return check(c, values) ? Cost(0) : v.top();
  }
};

Evaluator::Evaluator(const Instance& instance) : impl_(std::make_unique<Impl>(instance)) {}
Evaluator::~Evaluator() = default;
Evaluator::Evaluator(Evaluator&&) noexcept = default;
Evaluator& Evaluator::operator=(Evaluator&&) noexcept = default;

const Instance& Evaluator::instance() const noexcept { return *impl_->inst; }
std::size_t Evaluator::variable_count() const noexcept { return impl_->domains.size(); }
int Evaluator::variable_index(std::string_view name) const noexcept {
  auto it = impl_->index.find(std::string(name));
  return it == impl_->index.end() ? -1 : it->second;
}
std::span<const Int> Evaluator::domain(std::size_t var) const { return impl_->domains.at(var); }
std::size_t Evaluator::constraint_count() const noexcept { return impl_->constraints.size(); }
const ConstraintDef& Evaluator::constraint(std::size_t c) const { return *impl_->constraints.at(c).def; }
int Evaluator::last_variable(std::size_t c) const { return impl_->constraints.at(c).last; }
bool Evaluator::check(std::size_t c, std::span<const Int> values) const {
  return impl_->check(impl_->constraints.at(c), values);
}
Cost Evaluator::cost(std::size_t c, std::span<const Int> values) const {
  return impl_->cost(impl_->constraints.at(c), values);
}
std::size_t Evaluator::restriction_count(std::size_t block) const { return impl_->restrictions.at(block).size(); }
bool Evaluator::check_restriction(std::size_t block, std::size_t r, std::span<const Int> values) const {
  return impl_->check(impl_->restrictions.at(block).at(r), values);
}
int Evaluator::restriction_last_variable(std::size_t block, std::size_t r) const {
  return impl_->restrictions.at(block).at(r).last;
}
std::span<const int> Evaluator::restriction_reads(std::size_t block, std::size_t r) const {
  return impl_->restrictions.at(block).at(r).reads;
}
Cost Evaluator::top() const { return impl_->val().top(); }

// ---------------------------------------------------------------------------
// Map-based entry points

namespace {

// Values vector for the variables `c` reads, taken from `assignment`.
std::vector<Int> bind_reads(const Instance& inst, const Compiled& c, const Assignment& assignment) {
  std::vector<Int> values(inst.variables.size(), 0);
  for (int v : c.reads) {
    const auto& name = inst.variables[static_cast<std::size_t>(v)].name;
    auto it = assignment.find(name);
    if (it == assignment.end())
      throw Error("UnboundVariable", "variable " + name + " is not bound by the assignment");
    values[static_cast<std::size_t>(v)] = it->second;
  }
  return values;
}

}  // namespace

bool check_constraint(const Instance& instance, const ConstraintDef& constraint, const Assignment& assignment) {
  Evaluator::Impl impl(instance);
  const Compiled c = impl.compile(constraint);
  return impl.check(c, bind_reads(instance, c, assignment));
}

Cost cost_constraint(const Instance& instance, const ConstraintDef& constraint, const Assignment& assignment) {
  Evaluator::Impl impl(instance);
  const Compiled c = impl.compile(constraint);
  return impl.cost(c, bind_reads(instance, c, assignment));
}

bool eval_global(std::string_view name, std::span<const ParamValue> params, const Assignment& assignment) {
  std::vector<Int> values;
  std::map<std::string, int, std::less<>> slots;
  const Resolver resolve = [&](const std::string& var) {
    auto found = slots.find(var);
    if (found != slots.end()) return found->second;
    auto it = assignment.find(var);
    if (it == assignment.end()) throw Error("UnboundVariable", "variable " + var + " is not bound by the assignment");
    values.push_back(it->second);
    return slots.emplace(var, static_cast<int>(values.size() - 1)).first->second;
  };
  const auto g = compile_global(name, params, resolve);
  return eval_global_impl(g, values);
}

SolutionReport check_solution(const Instance& instance, const Assignment& assignment) {
  Evaluator ev(instance);
  for (const auto& [name, value] : assignment)
    if (ev.variable_index(name) < 0) throw Error("UnknownVariable", "variable " + name + " is not declared");
  std::vector<Int> values(ev.variable_count());
  for (std::size_t i = 0; i < ev.variable_count(); ++i) {
    const auto& name = instance.variables[i].name;
    auto it = assignment.find(name);
    if (it == assignment.end()) throw Error("PartialAssignment", "variable " + name + " is not assigned");
    const auto dom = ev.domain(i);
    if (!std::binary_search(dom.begin(), dom.end(), it->second))
      throw Error("OutOfDomain", "value " + std::to_string(it->second) + " is outside the domain of " + name);
    values[i] = it->second;
  }

  SolutionReport report;
  if (instance.type() == InstanceType::wcsp) {
    report.kind = InstanceType::wcsp;
    const Valuation v(ev.top());
    Cost total = v.clamp(instance.effective_initial_cost());
    for (std::size_t c = 0; c < ev.constraint_count(); ++c) total = v.combine(total, ev.cost(c, values));
    report.total_cost = total;
    report.consistent = v.consistent(total);
    report.satisfied = report.consistent;
    return report;
  }
  for (std::size_t c = 0; c < ev.constraint_count(); ++c)
    if (!ev.check(c, values)) report.violated.push_back(ev.constraint(c).name);
  report.satisfied = report.violated.empty();
  return report;
}

std::string format_assignment(const Instance& instance, const Assignment& assignment) {
  std::string out;
  for (const auto& v : instance.variables) {
    auto it = assignment.find(v.name);
    if (it == assignment.end()) continue;
    if (!out.empty()) out += ' ';
    out += v.name + "=" + std::to_string(it->second);
  }
  return out;
}

}  // namespace xcsp
