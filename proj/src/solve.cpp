#include <algorithm>

#include "xcsp/semantics.hpp"

namespace xcsp {

namespace {

class Search {
public:
  Search(const Instance& inst, const SolveOptions& options) : inst_(inst), ev_(inst), options_(options) {
    const std::size_t n = ev_.variable_count();
    values_.assign(n, 0);
    buckets_.resize(n);
    for (std::size_t c = 0; c < ev_.constraint_count(); ++c) {
      const int last = ev_.last_variable(c);
      if (last < 0)
        constant_.push_back(c);
      else
        buckets_[static_cast<std::size_t>(last)].push_back(c);
    }
    if (inst.type() == InstanceType::wcsp) valuation_.emplace(ev_.top());
  }

  SolveResult run() {
    Cost cost(0);
    if (valuation_) cost = valuation_->clamp(inst_.effective_initial_cost());
    if (admit(constant_, cost)) descend(0, cost);
    result_.nodes = nodes_;
    return std::move(result_);
  }

private:
  // Checks or costs the constraints in `bucket`; false prunes the branch.
  bool admit(const std::vector<std::size_t>& bucket, Cost& cost) const {
    if (!valuation_) {
      for (std::size_t c : bucket)
        if (!ev_.check(c, values_)) return false;
      return true;
    }
    for (std::size_t c : bucket) {
      cost = valuation_->combine(cost, ev_.cost(c, values_));
      if (!valuation_->consistent(cost)) return false;
    }
    if (options_.mode == SolveMode::min_cost && result_.best_cost && cost >= *result_.best_cost) return false;
    return true;
  }

  // Returns true to stop the whole search.
  bool descend(std::size_t depth, Cost cost) {
    if (depth == values_.size()) return record(cost);
    for (Int v : ev_.domain(depth)) {
      if (++nodes_ > options_.node_limit) throw BudgetExceeded(options_.node_limit, result_.count);
      values_[depth] = v;
      Cost next = cost;
      if (!admit(buckets_[depth], next)) continue;
      if (descend(depth + 1, next)) return true;
    }
    return false;
  }

  Assignment current() const {
    Assignment a;
    for (std::size_t i = 0; i < values_.size(); ++i) a.emplace(inst_.variables[i].name, values_[i]);
    return a;
  }

  bool record(Cost cost) {
    ++result_.count;
    switch (options_.mode) {
      case SolveMode::count: return false;
      case SolveMode::min_cost:
        result_.best_cost = cost;
        result_.best = current();
        return false;
      case SolveMode::first:
      case SolveMode::all: {
        auto a = current();
        if (options_.on_solution) options_.on_solution(a);
        result_.solutions.push_back(std::move(a));
        return options_.mode == SolveMode::first;
      }
    }
    return false;
  }

  const Instance& inst_;
  Evaluator ev_;
  const SolveOptions& options_;
  std::optional<Valuation> valuation_;
  std::vector<Int> values_;
  std::vector<std::vector<std::size_t>> buckets_;
  std::vector<std::size_t> constant_;
  std::uint64_t nodes_ = 0;
  SolveResult result_;
};

class QuantifiedSearch {
public:
  QuantifiedSearch(const Instance& inst, std::uint64_t limit) : inst_(inst), ev_(inst), limit_(limit) {
    const auto& blocks = *inst.quantification;
    std::vector<int> position(ev_.variable_count(), -1);
    for (const auto& b : blocks) {
      starts_.push_back(order_.size());
      quantifiers_.push_back(b.quantifier);
      for (const auto& name : b.scope) {
        const int v = ev_.variable_index(name);
        if (v < 0) throw Error("UnknownVariable", "quantified variable " + name + " is not declared");
        if (position[static_cast<std::size_t>(v)] >= 0)
          throw Error("DuplicateQuantification", "variable " + name + " is quantified twice");
        position[static_cast<std::size_t>(v)] = static_cast<int>(order_.size());
        order_.push_back(static_cast<std::size_t>(v));
      }
    }
    starts_.push_back(order_.size());
    for (std::size_t v = 0; v < position.size(); ++v)
      if (position[v] < 0)
        throw Error("OpenInstance", "variable " + inst.variables[v].name + " is not quantified");

    // Each restriction runs once the last variable it reads is assigned.
    triggers_.assign(order_.size(), {});
    pre_.resize(blocks.size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (std::size_t r = 0; r < ev_.restriction_count(b); ++r) {
        int at = -1;
        for (int v : ev_.restriction_reads(b, r)) at = std::max(at, position[static_cast<std::size_t>(v)]);
        if (at >= static_cast<int>(starts_[b + 1]))
          throw Error("RestrictionOrder", "restriction " + blocks[b].restrictions[r].name +
                                              " reads a variable quantified later");
        if (at < static_cast<int>(starts_[b]))
          pre_[b].push_back(r);
        else
          triggers_[static_cast<std::size_t>(at)].emplace_back(b, r);
      }
    values_.assign(ev_.variable_count(), 0);
  }

  bool run() { return block(0); }

private:
  bool block(std::size_t b) {
    if (b + 1 == starts_.size()) {
      for (std::size_t c = 0; c < ev_.constraint_count(); ++c)
        if (!ev_.check(c, values_)) return false;
      return true;
    }
    const bool forall = quantifiers_[b] == Quantifier::forall;
    for (std::size_t r : pre_[b])
      if (!ev_.check_restriction(b, r, values_)) return forall;
    return combination(b, starts_[b]);
  }

  bool combination(std::size_t b, std::size_t p) {
    if (p == starts_[b + 1]) return block(b + 1);
    const bool forall = quantifiers_[b] == Quantifier::forall;
    const std::size_t var = order_[p];
    for (Int v : ev_.domain(var)) {
      if (++nodes_ > limit_) throw BudgetExceeded(limit_, 0);
      values_[var] = v;
      bool allowed = true;
      for (const auto& [rb, r] : triggers_[p])
        if (!ev_.check_restriction(rb, r, values_)) {
          allowed = false;
          break;
        }
      if (!allowed) continue;
      const bool holds = combination(b, p + 1);
      if (forall && !holds) return false;
      if (!forall && holds) return true;
    }
    return forall;
  }

  const Instance& inst_;
  Evaluator ev_;
  std::uint64_t limit_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> starts_;
  std::vector<Quantifier> quantifiers_;
  std::vector<std::vector<std::size_t>> pre_;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> triggers_;
  std::vector<Int> values_;
  std::uint64_t nodes_ = 0;
};

}  // namespace

SolveResult solve_bruteforce(const Instance& instance, SolveOptions options) {
  const auto type = instance.type();
  if (type == InstanceType::qcsp || type == InstanceType::qcsp_plus)
    throw Error("UnsupportedInstanceType", "quantified instances are evaluated, not solved");
  Search search(instance, options);
  return search.run();
}

bool eval_qcsp(const Instance& instance, std::uint64_t node_limit) {
  const auto type = instance.type();
  if (type != InstanceType::qcsp && type != InstanceType::qcsp_plus)
    throw Error("UnsupportedInstanceType", "only quantified instances can be evaluated");
  if (!instance.quantification) throw Error("OpenInstance", "the instance has no quantification");
  QuantifiedSearch search(instance, node_limit);
  return search.run();
}

}  // namespace xcsp
