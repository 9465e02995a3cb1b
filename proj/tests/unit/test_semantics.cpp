#include <random>

#include "doctest.h"
#include "support/support.hpp"
#include "xcsp/globals.hpp"
#include "xcsp/lexparse.hpp"
#include "xcsp/semantics.hpp"

using namespace xcsp;
using support::fixture_text;
using support::replace_once;

namespace {
std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

std::vector<ParamValue> params(std::string_view text) { return parse_param_values(text); }

std::vector<ParamValue> cumulative_params(std::string_view tasks, Int limit) {
  return params(std::string(tasks) + " " + std::to_string(limit));
}

// Assignment "V0=a V1=b ..." over n variables.
Assignment assign(std::initializer_list<Int> values) {
  Assignment a;
  int i = 0;
  for (Int v : values) a.emplace("V" + std::to_string(i++), v);
  return a;
}
}  // namespace

TEST_SUITE("semantics") {
  TEST_CASE("4-queens in both encodings matches the permutation oracle") {
    const int expected = support::queens_oracle(4);
    CHECK(expected == 2);
    for (const char* name : {"queens-extension.xml", "queens-intension.xml"}) {
      CAPTURE(name);
      const auto inst = support::load_fixture(name);
      CHECK(solve_bruteforce(inst, {SolveMode::count}).count == static_cast<std::uint64_t>(expected));
      const auto all = solve_bruteforce(inst, {SolveMode::all});
      REQUIRE(all.solutions.size() == 2);
      CHECK(format_assignment(inst, all.solutions[0]) == "V0=2 V1=4 V2=1 V3=3");
      CHECK(format_assignment(inst, all.solutions[1]) == "V0=3 V1=1 V2=4 V3=2");
    }
  }

  TEST_CASE("extension and intension test instances agree") {
    const auto ext = solve_bruteforce(support::load_fixture("test-extension.xml"), {SolveMode::all});
    const auto inten = solve_bruteforce(support::load_fixture("test-intension.xml"), {SolveMode::all});
    CHECK(ext.solutions == inten.solutions);
  }

  TEST_CASE("magic square solution count matches permutation enumeration") {
    CHECK(solve_bruteforce(support::load_fixture("magic-square.xml"), {SolveMode::count}).count ==
          static_cast<std::uint64_t>(support::magic_square_oracle()));
  }

  TEST_CASE("weighted example agrees with the hand-transcribed cost sweep") {
    const auto inst = support::load_fixture("wcsp-example.xml");
    Int best = 5;
    std::uint64_t consistent = 0;
    for (Int a = 0; a < 3; ++a)
      for (Int b = 0; b < 3; ++b)
        for (Int c = 0; c < 3; ++c)
          for (Int d = 0; d < 3; ++d) {
            const Int expected = support::wcsp_example_cost(a, b, c, d);
            const auto report = check_solution(inst, assign({a, b, c, d}));
            REQUIRE(report.total_cost == Cost(expected));
            CHECK(report.consistent == (expected < 5));
            best = std::min(best, expected);
            consistent += expected < 5;
          }
    const auto r = solve_bruteforce(inst, {SolveMode::min_cost});
    REQUIRE(r.best_cost.has_value());
    CHECK(*r.best_cost == Cost(best));
    CHECK(support::wcsp_example_cost(r.best->at("V0"), r.best->at("V1"), r.best->at("V2"), r.best->at("V3")) == best);
    CHECK(solve_bruteforce(inst, {SolveMode::count}).count == consistent);
  }

  TEST_CASE("quantified examples") {
    CHECK(eval_qcsp(support::load_fixture("qcsp-example.xml")));
    // Only W=4, X=1 passes the first block; Y ranges over {2,3} and Y=2
    // leaves no Z with 4-2 > Z and 5 = 2+Z.
    CHECK_FALSE(eval_qcsp(support::load_fixture("qcsp-plus-example.xml")));
    CHECK(code_of([] { solve_bruteforce(support::load_fixture("qcsp-example.xml")); }) == "UnsupportedInstanceType");
    CHECK(code_of([] { eval_qcsp(support::load_fixture("queens-extension.xml")); }) == "UnsupportedInstanceType");
  }

  TEST_CASE("quantifier semantics on a two-variable game") {
    const std::string base = R"(<instance>
  <presentation name="g" format="XCSP 2.1" type="QCSP"/>
  <domains nbDomains="1"><domain name="D0" nbValues="3">0..2</domain></domains>
  <variables nbVariables="2"><variable name="X" domain="D0"/><variable name="Y" domain="D0"/></variables>
  <predicates nbPredicates="1"><predicate name="P"><parameters>int A int B</parameters>
    <expression><functional>REL</functional></expression></predicate></predicates>
  <constraints nbConstraints="1"><constraint name="C" arity="2" scope="X Y" reference="P"><parameters>X Y</parameters></constraint></constraints>
  <quantification nbBlocks="2"><block quantifier="Q1" scope="X"/><block quantifier="Q2" scope="Y"/></quantification>
</instance>)";
    auto game = [&](const char* rel, const char* q1, const char* q2) {
      return eval_qcsp(support::load_text(
          replace_once(replace_once(replace_once(base, "REL", rel), "Q1", q1), "Q2", q2)));
    };
    CHECK(game("eq(A,B)", "forall", "exists"));
    CHECK_FALSE(game("eq(A,B)", "exists", "forall"));
    CHECK(game("ge(A,B)", "exists", "forall"));
    CHECK_FALSE(game("gt(A,B)", "exists", "forall"));
    CHECK_FALSE(game("gt(A,B)", "forall", "forall"));
    CHECK(game("le(A,2)", "forall", "forall"));
  }

  TEST_CASE("check_solution on the queens instance") {
    const auto inst = support::load_fixture("queens-extension.xml");
    CHECK(check_solution(inst, assign({2, 4, 1, 3})).satisfied);
    const auto bad = check_solution(inst, assign({1, 1, 1, 1}));
    CHECK_FALSE(bad.satisfied);
    CHECK(bad.violated == std::vector<std::string>{"C0", "C1", "C2", "C3", "C4", "C5"});
    CHECK(code_of([&] { check_solution(inst, assign({9, 1, 1, 1})); }) == "OutOfDomain");
    CHECK(code_of([&] { check_solution(inst, assign({1, 1, 1})); }) == "PartialAssignment");
    auto extra = assign({2, 4, 1, 3});
    extra["W"] = 1;
    CHECK(code_of([&] { check_solution(inst, extra); }) == "UnknownVariable");
  }

  TEST_CASE("single constraints") {
    const auto inst = support::load_fixture("queens-intension.xml");
    const auto& c0 = inst.constraints[0];
    CHECK(check_constraint(inst, c0, assign({1, 3})));
    CHECK_FALSE(check_constraint(inst, c0, assign({1, 2})));
    CHECK(code_of([&] { check_constraint(inst, c0, assign({1})); }) == "UnboundVariable");
    const auto w = support::load_fixture("wcsp-example.xml");
    CHECK(cost_constraint(w, w.constraints[0], assign({0, 0})) == Cost(5));
    CHECK(cost_constraint(w, w.constraints[0], assign({0, 2})) == Cost(0));
  }

  TEST_CASE("allDifferent and weightedSum") {
    CHECK(eval_global("allDifferent", params("[ X Y 3 ]"), {{"X", 1}, {"Y", 2}}));
    CHECK_FALSE(eval_global("alldifferent", params("[ X Y 3 ]"), {{"X", 3}, {"Y", 2}}));
    const std::vector<BodyPiece> le = {TextPiece{"[ { 2 X } { -1 Y } ] ", 0}, ElementPiece{"le", 21},
                                       TextPiece{" 3", 26}};
    const auto ws = bind_conventional_order("weightedSum", parse_param_values(lex_body(le)));
    CHECK(eval_global("weightedSum", ws, {{"X", 2}, {"Y", 1}}));
    CHECK_FALSE(eval_global("weightedSum", ws, {{"X", 3}, {"Y", 1}}));
    CHECK(code_of([&] { eval_global("weightedSum", ws, {{"X", 3}}); }) == "UnboundVariable");
  }

  TEST_CASE("element is 1-based") {
    const auto p = params("I [ 10 20 X ] V");
    CHECK(eval_global("element", p, {{"I", 1}, {"V", 10}, {"X", 0}}));
    CHECK(eval_global("element", p, {{"I", 3}, {"V", 7}, {"X", 7}}));
    CHECK_FALSE(eval_global("element", p, {{"I", 2}, {"V", 10}, {"X", 0}}));
    CHECK_FALSE(eval_global("element", p, {{"I", 0}, {"V", 10}, {"X", 0}}));
    CHECK_FALSE(eval_global("element", p, {{"I", 4}, {"V", 10}, {"X", 0}}));
  }

  TEST_CASE("cumulative") {
    auto cum = [](std::string_view tasks, Int limit, const Assignment& a = {}) {
      return eval_global("cumulative", bind_conventional_order("cumulative", cumulative_params(tasks, limit)), a);
    };
    const std::vector<BodyPiece> pieces = {TextPiece{"[ { 0 2 ", 0}, ElementPiece{"nil", 8},
                                           TextPiece{" 1 } { 1 ", 14}, ElementPiece{"nil", 23}, TextPiece{" 3 1 } ] 1", 29}};
    const auto overlap = bind_conventional_order("cumulative", parse_param_values(lex_body(pieces)));
    CHECK_FALSE(eval_global("cumulative", overlap, {}));
    // Two tasks of height 2 overlapping on [1, 2): peak load 4.
    CHECK_FALSE(cum("[ { 0 2 2 2 } { 1 2 3 2 } ]", 3));
    CHECK(cum("[ { 0 2 2 2 } { 1 2 3 2 } ]", 4));
    CHECK(cum("[ { 0 2 2 1 } { 2 1 3 1 } ]", 1));
    CHECK_FALSE(cum("[ { 0 2 2 1 } { 1 1 2 1 } ]", 1));
    CHECK(cum("[ { 0 2 2 1 } { 1 1 2 1 } ]", 2));
    CHECK(cum("[ { S 2 E 2 } ]", 2, {{"S", 4}, {"E", 6}}));
    CHECK(code_of([&] { cum("[ { 0 2 5 1 } ]", 1); }) == "InconsistentTask");
    CHECK_FALSE(cum("[ { 0 1 1 -1 } ]", 5));
  }

  TEST_CASE("unsupported and malformed globals") {
    CHECK(code_of([] { eval_global("among", params("[ X ]"), {{"X", 1}}); }) == "UnsupportedGlobal");
    CHECK(code_of([] { eval_global("element", params("I"), {{"I", 1}}); }) == "MalformedParams");
  }

  TEST_CASE("evaluator exposes compiled constraints") {
    const auto inst = support::load_fixture("queens-extension.xml");
    const Evaluator ev(inst);
    CHECK(ev.variable_count() == 4);
    CHECK(ev.variable_index("V2") == 2);
    CHECK(ev.variable_index("nope") == -1);
    CHECK(ev.constraint_count() == 6);
    CHECK(ev.last_variable(2) == 3);
    const std::vector<Int> values{2, 4, 1, 3};
    for (std::size_t c = 0; c < ev.constraint_count(); ++c) CHECK(ev.check(c, values));
    CHECK_THROWS_AS(ev.top(), Error);
  }

  TEST_CASE("solve modes") {
    const auto inst = support::load_fixture("queens-extension.xml");
    const auto first = solve_bruteforce(inst, {SolveMode::first});
    CHECK(first.solutions.size() == 1);
    CHECK(first.count == 1);
    int seen = 0;
    SolveOptions options{SolveMode::all};
    options.on_solution = [&](const Assignment&) { ++seen; };
    solve_bruteforce(inst, options);
    CHECK(seen == 2);
    const auto min = solve_bruteforce(inst, {SolveMode::min_cost});
    CHECK(*min.best_cost == Cost(0));
  }

  TEST_CASE("node budget") {
    const auto inst = support::load_fixture("magic-square.xml");
    SolveOptions options{SolveMode::count, 1000};
    try {
      solve_bruteforce(inst, options);
      FAIL("budget not enforced");
    } catch (const BudgetExceeded& e) {
      CHECK(e.code() == "BudgetExceeded");
      CHECK(e.nodes() == 1000);
    }
    CHECK(code_of([&] { eval_qcsp(support::load_fixture("qcsp-example.xml"), 2); }) == "BudgetExceeded");
  }

  TEST_CASE("cost functions reject negative results") {
    const std::string w = fixture_text("wcsp-example.xml");
    const auto inst = support::load_text(replace_once(w, "if(eq(X,Y),0,5)", "if(eq(X,Y),0,-5)"));
    CHECK(code_of([&] { check_solution(inst, assign({0, 1, 1, 1})); }) == "NegativeFunctionCost");
    const auto big = support::load_text(replace_once(w, "if(eq(X,Y),0,5)", "if(eq(X,Y),0,50)"));
    CHECK(cost_constraint(big, big.constraints[1], assign({0, 1, 1})) == Cost(5));
  }

  TEST_CASE("random instances agree with plain filtering") {
    std::mt19937_64 rng(20240611);
    for (int i = 0; i < 40; ++i) {
      const auto r = support::random_instance(rng);
      CAPTURE(r.xml);
      const auto inst = support::load_text(r.xml);
      CHECK(solve_bruteforce(inst, {SolveMode::count}).count == r.count_by_filter());
    }
  }
}
