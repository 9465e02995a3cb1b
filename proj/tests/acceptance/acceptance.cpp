// Acceptance suite: one PASS or FAIL line per criterion; exits nonzero when
// any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "support/support.hpp"
#include "xcsp/document.hpp"
#include "xcsp/expr.hpp"
#include "xcsp/lexparse.hpp"
#include "xcsp/semantics.hpp"
#include "xcsp/validate.hpp"

using namespace xcsp;
using Clock = std::chrono::steady_clock;

namespace {

struct Failure {
  std::string reason;
};

void require(bool condition, const std::string& reason) {
  if (!condition) throw Failure{reason};
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

void fixture_parsing() {
  const auto start = Clock::now();
  for (const auto& name : support::fixture_names()) {
    const auto r = load_instance(support::fixture_text(name));
    require(r.ok() && !has_errors(r.diagnostics), name + " reported errors");
  }
  require(seconds_since(start) < 1.0, "loading took longer than 1 s");
}

void round_trip() {
  const auto start = Clock::now();
  for (const auto& name : support::fixture_names()) {
    const auto original = support::load_fixture(name);
    for (auto notation : {Notation::tagged, Notation::abridged}) {
      const std::string written = write_instance(original, notation);
      require(written == write_instance(original, notation), name + " write is not deterministic");
      const auto diff = first_difference(original, support::load_text(written));
      require(!diff, name + " " + std::string(to_string(notation)) + ": " + diff.value_or(""));
    }
  }
  require(seconds_since(start) < 1.0, "round trips took longer than 1 s");
}

void grammar() {
  require(parse_domain_values("1..3 7 10..14").values.size() == 9, "interval expansion");
  const auto implicit_form = parse_weighted_tuples("1:0 1|0 3|10:1 2|1 3|2 0|2 1|1:3 1", 2);
  const auto explicit_form = parse_weighted_tuples("1:0 1|1:0 3|10:1 2|10:1 3|10:2 0|10:2 1|1:3 1", 2);
  std::vector<Int> costs;
  for (const auto& w : implicit_form) costs.push_back(w.cost.value());
  require(costs == std::vector<Int>{1, 1, 10, 10, 10, 10, 1}, "implicit costs");
  require(implicit_form == explicit_form, "implicit and explicit forms differ");
}

void extension_intension() {
  const auto ext = support::load_fixture("queens-extension.xml");
  const auto inten = support::load_fixture("queens-intension.xml");
  const auto& p = inten.predicates.at(0);
  const auto& domain = ext.domains.at(0).values;
  const std::vector<std::size_t> expected_sizes{10, 8, 6};
  for (Int z = 1; z <= 3; ++z) {
    std::vector<Tuple> falsifying;
    for (Int x : domain)
      for (Int y : domain) {
        const std::map<std::string, Int, std::less<>> b{
            {p.formals[0].name, x}, {p.formals[1].name, y}, {p.formals[2].name, z}};
        if (!std::get<bool>(evaluate(*p.body, b))) falsifying.push_back({x, y});
      }
    const auto& rel = ext.relations.at(static_cast<std::size_t>(z - 1));
    require(falsifying.size() == expected_sizes[static_cast<std::size_t>(z - 1)], rel.name + " size");
    require(falsifying == rel.tuples, rel.name + " tuples differ");
  }
}

void oracle_counts() {
  for (const char* name : {"queens-extension.xml", "queens-intension.xml"})
    require(solve_bruteforce(support::load_fixture(name), {SolveMode::count}).count == 2, std::string(name) + " count");
  require(support::queens_oracle(4) == 2, "queens oracle");

  const auto start = Clock::now();
  const auto magic = solve_bruteforce(support::load_fixture("magic-square.xml"), {SolveMode::count}).count;
  require(magic == static_cast<std::uint64_t>(support::magic_square_oracle()) && magic == 8, "magic square count");
  require(seconds_since(start) < 30.0, "magic square took longer than 30 s");

  Int best = 5;
  for (Int a = 0; a < 3; ++a)
    for (Int b = 0; b < 3; ++b)
      for (Int c = 0; c < 3; ++c)
        for (Int d = 0; d < 3; ++d) best = std::min(best, support::wcsp_example_cost(a, b, c, d));
  const auto w = solve_bruteforce(support::load_fixture("wcsp-example.xml"), {SolveMode::min_cost});
  require(w.best_cost && *w.best_cost == Cost(best), "weighted minimum cost");

  const auto q = Clock::now();
  require(eval_qcsp(support::load_fixture("qcsp-example.xml")), "quantified example is not TRUE");
  require(seconds_since(q) < 1.0, "quantified evaluation took longer than 1 s");
}

void valuation_properties() {
  for (Int k = 1; k <= 10; ++k) {
    const Valuation v{Cost(k)};
    auto c = [](Int x) { return Cost(x); };
    for (Int a = 0; a <= k; ++a) {
      require(v.combine(c(a), c(0)) == c(a), "identity");
      require(v.combine(c(a), c(k)) == c(k), "absorption");
      for (Int b = 0; b <= k; ++b) {
        require(v.combine(c(a), c(b)) == c(std::min(k, a + b)), "definition");
        require(v.combine(c(a), c(b)) == v.combine(c(b), c(a)), "commutativity");
        for (Int d = 0; d <= k; ++d) {
          require(v.combine(v.combine(c(a), c(b)), c(d)) == v.combine(c(a), v.combine(c(b), c(d))), "associativity");
          if (a <= b) require(v.combine(c(a), c(d)) <= v.combine(c(b), c(d)), "monotonicity");
        }
      }
    }
  }
}

void expression_evaluator() {
  using Bindings = std::map<std::string, Int, std::less<>>;
  auto truth = [](const char* op, std::function<bool(bool, bool)> expected) {
    const auto e = parse_functional(std::string(op) + "(eq(A,1),eq(B,1))");
    for (Int a = 0; a < 2; ++a)
      for (Int b = 0; b < 2; ++b)
        require(std::get<bool>(evaluate(*e, Bindings{{"A", a}, {"B", b}})) == expected(a, b), op);
  };
  truth("and", [](bool a, bool b) { return a && b; });
  truth("or", [](bool a, bool b) { return a || b; });
  truth("xor", [](bool a, bool b) { return a != b; });
  truth("iff", [](bool a, bool b) { return a == b; });
  const auto negation = parse_functional("not(eq(A,1))");
  for (Int a = 0; a < 2; ++a) require(std::get<bool>(evaluate(*negation, Bindings{{"A", a}})) == !a, "not");

  const auto div = parse_functional("div(A,B)");
  const auto mod = parse_functional("mod(A,B)");
  for (Int a = -50; a <= 50; ++a)
    for (Int b = -50; b <= 50; ++b) {
      if (b == 0) continue;
      const Bindings v{{"A", a}, {"B", b}};
      const Int q = std::get<Int>(evaluate(*div, v));
      const Int r = std::get<Int>(evaluate(*mod, v));
      require(q * b + r == a && std::abs(r) < std::abs(b), "div/mod identity");
    }

  const auto guarded = parse_functional("if(eq(A,0),0,div(1,A))");
  require(std::get<Int>(evaluate(*guarded, Bindings{{"A", 0}})) == 0, "guarded division");
  bool probe_fired = false;
  try {
    evaluate(*parse_functional("if(false,0,div(1,0))"), Bindings{});
  } catch (const Error& e) {
    probe_fired = e.code() == "DivisionByZero";
  }
  require(probe_fired, "division-by-zero probe did not fire on the selected branch");
}

std::set<std::string> strict_errors(const std::string& text) {
  std::set<std::string> codes;
  for (const auto& d : validate_competition(support::load_text(text)).diagnostics)
    if (d.severity == Severity::error) codes.insert(d.code);
  return codes;
}

void competition_validator() {
  using support::replace_once;
  const std::string queens = support::fixture_text("queens-extension.xml");
  require(validate_competition(support::load_text(queens)).passed, "queens does not pass strict mode");
  const std::string r0 = "1 1|1 2|2 1|2 2|2 3|3 2|3 3|3 4|4 3|4 4";
  auto expect = [](const std::set<std::string>& got, const std::string& code) {
    std::string list;
    for (const auto& c : got) list += " " + c;
    require(got == std::set<std::string>{code}, "expected only " + code + ", got" + list);
  };
  expect(strict_errors(replace_once(queens, r0, "1 2|1 1|2 1|2 2|2 3|3 2|3 3|3 4|4 3|4 4")), "TuplesNotSorted");
  expect(strict_errors(replace_once(queens, "      1..4\n", "      1..4 4\n")), "DuplicateDomainValue");
  expect(strict_errors(replace_once(replace_once(queens, r0, r0 + "|5 5"), "nbTuples=\"10\"", "nbTuples=\"11\"")),
         "TupleOutOfDomain");

  const std::string magic = support::fixture_text("magic-square.xml");
  const auto baseline = strict_errors(magic);
  auto added = [&](const std::string& text) {
    auto codes = strict_errors(text);
    for (const auto& c : baseline) codes.erase(c);
    return codes;
  };
  expect(added(replace_once(magic, "[ X0 X1 X2 X3 X4 X5 X6 X7 X8 ]", "[ X0 X1 X2 X3 X4 X5 X6 X7 X8 5 ]")),
         "AllDifferentConstant");
  expect(added(replace_once(magic, "global:allDifferent", "global:not_all_equal")), "NonCompetitionGlobal");
}

void cross_oracle() {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const auto r = support::random_instance(rng);
    const auto got = solve_bruteforce(support::load_text(r.xml), {SolveMode::count}).count;
    const auto want = r.count_by_filter();
    require(got == want, "instance " + std::to_string(i) + ": solver " + std::to_string(got) + ", filter " +
                             std::to_string(want));
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void()>>> criteria = {
      {"fixture parsing", fixture_parsing},
      {"round trip", round_trip},
      {"interval and weighted-tuple grammar", grammar},
      {"extension/intension cross-check", extension_intension},
      {"oracle counts", oracle_counts},
      {"valuation structure properties", valuation_properties},
      {"expression evaluator", expression_evaluator},
      {"competition validator", competition_validator},
      {"random cross-oracle", cross_oracle},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = Clock::now();
    std::string reason;
    try {
      criteria[i].second();
    } catch (const Failure& f) {
      reason = f.reason;
    } catch (const std::exception& e) {
      reason = std::string("exception: ") + e.what();
    }
    const double elapsed = seconds_since(start);
    std::cout << (reason.empty() ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " ("
              << elapsed << " s)";
    if (!reason.empty()) std::cout << " - " << reason;
    std::cout << "\n";
    failures += !reason.empty();
  }
  return failures == 0 ? 0 : 1;
}
