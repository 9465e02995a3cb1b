#include <algorithm>
#include <optional>

#include "doctest.h"
#include "xcsp/cost.hpp"
#include "xcsp/error.hpp"

using xcsp::Cost;
using xcsp::Int;
using xcsp::Valuation;

TEST_SUITE("cost") {
  TEST_CASE("parse and print") {
    CHECK(Cost::parse("0") == Cost(0));
    CHECK(Cost::parse("17").value() == 17);
    CHECK(Cost::parse("infinity").is_infinite());
    CHECK(Cost::infinity().to_string() == "infinity");
    CHECK(Cost(42).to_string() == "42");
    CHECK_THROWS_AS(Cost::parse("-1"), xcsp::Error);
    CHECK_THROWS_AS(Cost::parse("abc"), xcsp::Error);
    CHECK_THROWS_AS(Cost(-3), xcsp::Error);
    CHECK_THROWS_AS(Cost::infinity().value(), xcsp::Error);
  }

  TEST_CASE("ordering places infinity above every finite cost") {
    CHECK(Cost(0) < Cost(1));
    CHECK(Cost(1000000) < Cost::infinity());
    CHECK(Cost::infinity() == Cost::infinity());
    CHECK_FALSE(Cost::infinity() < Cost::infinity());
  }

  TEST_CASE("saturating addition") {
    CHECK(saturating_add(Cost(2), Cost(3)) == Cost(5));
    CHECK(saturating_add(Cost(2), Cost::infinity()).is_infinite());
    CHECK(saturating_add(Cost(INT64_MAX), Cost(1)).is_infinite());
  }

  TEST_CASE("combine is min(k, a + b) for every finite k up to 10") {
    for (Int k = 1; k <= 10; ++k) {
      const Valuation v{Cost(k)};
      for (Int a = 0; a <= k; ++a) {
        for (Int b = 0; b <= k; ++b) {
          CHECK(v.combine(Cost(a), Cost(b)) == Cost(std::min(k, a + b)));
          for (Int c = 0; c <= k; ++c) {
            // associativity and monotonicity
            CHECK(v.combine(v.combine(Cost(a), Cost(b)), Cost(c)) == v.combine(Cost(a), v.combine(Cost(b), Cost(c))));
            if (a <= b) CHECK(v.combine(Cost(a), Cost(c)) <= v.combine(Cost(b), Cost(c)));
          }
          CHECK(v.combine(Cost(a), Cost(b)) == v.combine(Cost(b), Cost(a)));
        }
        CHECK(v.combine(Cost(a), Cost(0)) == Cost(a));
        CHECK(v.combine(Cost(a), Cost(k)) == Cost(k));
        CHECK(v.consistent(Cost(a)) == (a < k));
      }
    }
  }

  TEST_CASE("unbounded structure") {
    const Valuation v{Cost::infinity()};
    CHECK(v.combine(Cost(3), Cost(4)) == Cost(7));
    CHECK(v.combine(Cost(3), Cost::infinity()).is_infinite());
    CHECK(v.consistent(Cost(1000)));
    CHECK_FALSE(v.consistent(Cost::infinity()));
  }

  TEST_CASE("clamp maps infinity and large costs to k") {
    const Valuation v{Cost(5)};
    CHECK(v.clamp(Cost::infinity()) == Cost(5));
    CHECK(v.clamp(Cost(9)) == Cost(5));
    CHECK(v.clamp(Cost(4)) == Cost(4));
  }
}
