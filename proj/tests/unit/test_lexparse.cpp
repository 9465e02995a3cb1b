#include "doctest.h"
#include "xcsp/error.hpp"
#include "xcsp/lexparse.hpp"

using namespace xcsp;

namespace {
std::string code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}
}  // namespace

TEST_SUITE("lexparse") {
  TEST_CASE("lexer token kinds and offsets") {
    const auto t = lex_text("[ a 1..3 ] {/k -2} | 4:", 10);
    REQUIRE(t.size() >= 12);
    CHECK(t[0].kind == TokenKind::lbracket);
    CHECK(t[1].kind == TokenKind::identifier);
    CHECK(t[1].offset == 12);
    CHECK(t[2].kind == TokenKind::integer);
    CHECK(t[3].kind == TokenKind::dotdot);
    CHECK(t[7].kind == TokenKind::slash_key);
    CHECK(t[7].lexeme == "k");
    CHECK(t[8].integer == -2);
  }

  TEST_CASE("lexer rejects stray characters and dangling operators") {
    CHECK(code_of([] { lex_text("1 .. "); }) == "LexError");
    CHECK(code_of([] { lex_text("1 # 2"); }) == "LexError");
    CHECK(code_of([] { lex_text("99999999999999999999"); }) == "LexError");
  }

  TEST_CASE("domain with intervals expands to nine values") {
    const auto d = parse_domain_values("1..3 7 10..14");
    CHECK(d.values == std::vector<Int>{1, 2, 3, 7, 10, 11, 12, 13, 14});
    CHECK(d.pieces.size() == 3);
    CHECK(d.pieces[0] == DomainPiece{1, 3, true});
  }

  TEST_CASE("domain values are sorted and deduplicated") {
    const auto d = parse_domain_values("5 1..3 2");
    CHECK(d.values == std::vector<Int>{1, 2, 3, 5});
    CHECK(parse_domain_values("-3..-1").values == std::vector<Int>{-3, -2, -1});
  }

  TEST_CASE("domain errors") {
    CHECK(code_of([] { parse_domain_values("3..1"); }) == "InvertedInterval");
    CHECK(code_of([] { parse_domain_values(""); }) == "EmptyDomain");
    CHECK(code_of([] { parse_domain_values("0..100000000"); }) == "DomainTooLarge");
  }

  TEST_CASE("tuples") {
    const auto t = parse_tuples("0 1|0 3|1 2", 2);
    REQUIRE(t.size() == 3);
    CHECK(t[1] == Tuple{0, 3});
    CHECK(parse_tuples("", 2).empty());
    CHECK(code_of([] { parse_tuples("0 1|0", 2); }) == "ArityMismatch");
    CHECK(format_tuples(t) == "0 1|0 3|1 2");
  }

  TEST_CASE("implicit costs equal the fully explicit form") {
    const auto explicit_form = parse_weighted_tuples("1:0 1|1:0 3|10:1 2|10:1 3|10:2 0|10:2 1|1:3 1", 2);
    const auto implicit_form = parse_weighted_tuples("1:0 1|0 3|10:1 2|1 3|2 0|2 1|1:3 1", 2);
    const auto multiline = parse_weighted_tuples("1:  0 1|0 3|\n 10: 1 2|1 3|2 0|2 1|\n 1:  3 1", 2);
    std::vector<Int> costs;
    for (const auto& w : implicit_form) costs.push_back(w.cost.value());
    CHECK(costs == std::vector<Int>{1, 1, 10, 10, 10, 10, 1});
    CHECK(implicit_form == explicit_form);
    CHECK(multiline == explicit_form);
    CHECK(format_weighted_tuples(explicit_form) == "1:0 1|0 3|10:1 2|1 3|2 0|2 1|1:3 1");
  }

  TEST_CASE("weighted tuple errors") {
    CHECK(code_of([] { parse_weighted_tuples("0 1|2:1 1", 2); }) == "MissingFirstCost");
    CHECK(code_of([] { parse_weighted_tuples("-1:0 1", 2); }) == "NegativeCost");
  }

  TEST_CASE("formal and effective parameters") {
    const auto f = parse_formal_parameters("int X int Y");
    REQUIRE(f.size() == 2);
    CHECK(f[1].name == "Y");
    CHECK(code_of([] { parse_formal_parameters("int X int X"); }) == "DuplicateParameter");
    CHECK(code_of([] { parse_formal_parameters("real X"); }) == "UnknownType");
    CHECK(code_of([] { parse_formal_parameters("int add"); }) == "ReservedIdentifier");
    const auto e = parse_effective_parameters("V0 V1 3");
    REQUIRE(e.size() == 3);
    CHECK(std::get<VarRef>(e[0]).name == "V0");
    CHECK(std::get<Int>(e[2]) == 3);
  }

  TEST_CASE("structured parameter values") {
    const std::vector<BodyPiece> pieces = {TextPiece{"[ { 1 X0 } { 1 X1 } ] ", 0}, ElementPiece{"eq", 22},
                                           TextPiece{" 15", 27}};
    const auto p = parse_param_values(lex_body(pieces));
    REQUIRE(p.size() == 3);
    REQUIRE(p[0].is_list());
    CHECK(p[0].as_list().items.size() == 2);
    CHECK(p[0].as_list().items[0].as_dict().positional);
    CHECK(p[1].as_atom() == RelOp::eq);
    CHECK(p[2].as_int() == 15);
    const std::vector<BodyPiece> nil = {TextPiece{"{ /origin 1 /duration ", 0}, ElementPiece{"nil", 22},
                                        TextPiece{" }", 28}};
    const auto k = parse_param_values(lex_body(nil));
    REQUIRE(k[0].is_dict());
    CHECK(k[0].as_dict().find("origin")->as_int() == 1);
    CHECK(k[0].as_dict().find("duration")->is_nil());
    CHECK(code_of([] { parse_param_values("[ 1 2"); }) == "UnbalancedBracket");
    CHECK(code_of([] { parse_param_values("{ 1 2 ]"); }) == "UnbalancedBrace");
    CHECK(code_of([] { parse_param_values("{ /a 1 /a 2 }"); }) == "DuplicateKey");
    CHECK(code_of([] { parse_param_values("{ /a 1 2 }"); }) == "MixedDictStyle");
  }
}
