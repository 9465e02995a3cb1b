#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xcsp/cost.hpp"
#include "xcsp/error.hpp"
#include "xcsp/model.hpp"

namespace xcsp {

using Assignment = std::map<std::string, Int, std::less<>>;

struct SolutionReport {
  InstanceType kind = InstanceType::csp;  // csp or wcsp
  bool satisfied = false;                 // wcsp: same as consistent
  std::vector<std::string> violated;      // csp: violated constraint names
  Cost total_cost;                        // wcsp
  bool consistent = false;                // wcsp: total_cost < maximalCost
};

/// Constraint tables compiled once per instance: variable indices, sorted
/// relation tables, slot-bound expressions and decoded global parameters.
/// Immutable after construction and safe to share between threads.
class Evaluator {
public:
  explicit Evaluator(const Instance& instance);
  ~Evaluator();
  Evaluator(Evaluator&&) noexcept;
  Evaluator& operator=(Evaluator&&) noexcept;

  const Instance& instance() const noexcept;
  std::size_t variable_count() const noexcept;
  int variable_index(std::string_view name) const noexcept;  // -1 when absent
  std::span<const Int> domain(std::size_t var) const;

  /// Goal constraints in declaration order.
  std::size_t constraint_count() const noexcept;
  const ConstraintDef& constraint(std::size_t c) const;
  /// Highest variable index the constraint reads.
  int last_variable(std::size_t c) const;
  /// `values` is indexed by variable index; only the variables the
  /// constraint reads need to hold meaningful values.
  bool check(std::size_t c, std::span<const Int> values) const;
  /// S(k) cost of one constraint; requires a WCSP instance.
  Cost cost(std::size_t c, std::span<const Int> values) const;

  /// Restriction constraints of block `b`.
  std::size_t restriction_count(std::size_t block) const;
  bool check_restriction(std::size_t block, std::size_t r, std::span<const Int> values) const;
  int restriction_last_variable(std::size_t block, std::size_t r) const;
  /// Sorted variable indices a restriction reads.
  std::span<const int> restriction_reads(std::size_t block, std::size_t r) const;

  /// maximalCost of a WCSP instance.
  Cost top() const;

  struct Impl;

private:
  std::unique_ptr<Impl> impl_;
};

bool check_constraint(const Instance& instance, const ConstraintDef& constraint, const Assignment& assignment);
bool eval_global(std::string_view name, std::span<const ParamValue> params, const Assignment& assignment);
Cost cost_constraint(const Instance& instance, const ConstraintDef& constraint, const Assignment& assignment);
SolutionReport check_solution(const Instance& instance, const Assignment& assignment);

// ---------------------------------------------------------------------------
// Exhaustive search

enum class SolveMode { first, all, count, min_cost };

inline constexpr std::uint64_t default_node_limit = 10'000'000;

struct SolveOptions {
  SolveMode mode = SolveMode::count;
  std::uint64_t node_limit = default_node_limit;
  /// Called for each solution in first/all mode, in depth-first order.
  std::function<void(const Assignment&)> on_solution;
};

struct SolveResult {
  std::vector<Assignment> solutions;  // first/all
  std::uint64_t count = 0;            // solutions found (all modes)
  std::optional<Cost> best_cost;      // min_cost
  std::optional<Assignment> best;     // min_cost
  std::uint64_t nodes = 0;
};

/// Budget exhaustion; carries the progress made before stopping.
class BudgetExceeded : public Error {
public:
  BudgetExceeded(std::uint64_t nodes, std::uint64_t solutions)
      : Error("BudgetExceeded", "node budget of " + std::to_string(nodes) + " exhausted after " +
                                    std::to_string(solutions) + " solutions"),
        nodes_(nodes), solutions_(solutions) {}

  std::uint64_t nodes() const noexcept { return nodes_; }
  std::uint64_t solutions() const noexcept { return solutions_; }

private:
  std::uint64_t nodes_;
  std::uint64_t solutions_;
};

/// Depth-first enumeration over variables in declaration order and values
/// in ascending order. For WCSP instances first/all/count report consistent
/// assignments (total cost below maximalCost).
SolveResult solve_bruteforce(const Instance& instance, SolveOptions options = {});

/// Truth value of a QCSP or QCSP+ instance by recursion over the blocks.
bool eval_qcsp(const Instance& instance, std::uint64_t node_limit = default_node_limit);

/// "V0=2 V1=4 ..." in declaration order.
std::string format_assignment(const Instance& instance, const Assignment& assignment);

}  // namespace xcsp
