#include "doctest.h"
#include "support/support.hpp"
#include "xcsp/error.hpp"
#include "xcsp/globals.hpp"
#include "xcsp/lexparse.hpp"
#include "xcsp/model.hpp"

using namespace xcsp;

TEST_SUITE("model") {
  TEST_CASE("identifiers") {
    CHECK(is_identifier("V0"));
    CHECK(is_identifier("_x"));
    CHECK_FALSE(is_identifier("0V"));
    CHECK_FALSE(is_identifier("Magic Square"));
    CHECK_FALSE(is_identifier(""));
  }

  TEST_CASE("instance types") {
    CHECK(to_string(InstanceType::qcsp_plus) == "QCSP+");
    CHECK(instance_type_from_string("WCSP") == InstanceType::wcsp);
    CHECK_FALSE(instance_type_from_string("MAXCSP").has_value());
  }

  TEST_CASE("count claims") {
    CHECK(CountClaim::parse("?")->kind == CountClaim::Kind::unknown);
    CHECK(CountClaim::parse("at most 3")->kind == CountClaim::Kind::at_most);
    CHECK(CountClaim::parse("at least 2")->value == 2);
    CHECK(CountClaim::parse("7")->value == 7);
    CHECK_FALSE(CountClaim::parse("many").has_value());
    CHECK(CountClaim::parse("at most 3")->to_string() == "at most 3");
  }

  TEST_CASE("name resolution and lookups") {
    const auto inst = support::load_fixture("queens-extension.xml");
    CHECK(std::holds_alternative<const Relation*>(inst.resolve("R1")));
    CHECK(std::holds_alternative<const ConstraintDef*>(inst.resolve("C5")));
    CHECK_THROWS_AS(inst.resolve("nothing"), Error);
    REQUIRE(inst.domain_of("V2") != nullptr);
    CHECK(inst.domain_of("V2")->contains(4));
    CHECK_FALSE(inst.domain_of("V2")->contains(5));
  }

  TEST_CASE("model equality reports the first difference") {
    const auto a = support::load_fixture("queens-extension.xml");
    auto b = a;
    CHECK(model_equal(a, b));
    b.relations[0].tuples[0] = {4, 4};
    const auto diff = first_difference(a, b);
    REQUIRE(diff.has_value());
    CHECK(diff->find("R0") != std::string::npos);
  }

  TEST_CASE("global catalog") {
    const auto* ws = find_global("WEIGHTEDSUM");
    REQUIRE(ws != nullptr);
    CHECK(ws->display == "weightedSum");
    CHECK(ws->competition);
    CHECK_FALSE(find_global("among")->competition);
    CHECK(find_global("no_such_global") == nullptr);
    int competition = 0;
    for (const auto& g : global_catalog()) competition += g.competition;
    CHECK(competition == 4);
  }

  TEST_CASE("conventional order binding") {
    auto params = parse_param_values("[ { 1 X } { 2 Y } ]");
    params = bind_conventional_order("weightedSum", params);
    const auto& d = params[0].as_list().items[1].as_dict();
    CHECK(d.positional);
    CHECK(d.find("coef")->as_int() == 2);
    CHECK(d.find("var")->as_var().name == "Y");
    CHECK_THROWS_WITH_AS(bind_conventional_order("weightedSum", parse_param_values("[ { 1 X 3 } ]")),
                         doctest::Contains("3"), Error);

    const auto keyed = parse_param_values("[ { /var X /coef 1 } ]");
    CHECK(equivalent(keyed[0], bind_conventional_order("weightedSum", parse_param_values("[ { 1 X } ]"))[0]));
  }

  TEST_CASE("keyed and positional forms are equivalent") {
    const std::vector<BodyPiece> pieces = {TextPiece{"[ { 0 2 ", 0}, ElementPiece{"nil", 8}, TextPiece{" 1 } ] 3", 14}};
    const auto positional = bind_conventional_order("cumulative", parse_param_values(lex_body(pieces)));
    const auto keyed = to_keyed_form(positional);
    const auto& d = keyed[0].as_list().items[0].as_dict();
    CHECK(d.entries.size() == 3);
    CHECK(d.find("end") == nullptr);
    CHECK(equivalent(positional, keyed));
    CHECK(equivalent(to_conventional_order("cumulative", keyed), positional));
    CHECK_FALSE(check_signature("cumulative", positional).has_value());
  }

  TEST_CASE("signature checks for the competition globals") {
    CHECK_FALSE(check_signature("alldifferent", parse_param_values("[ X Y 3 ]")).has_value());
    CHECK(check_signature("alldifferent", parse_param_values("X Y")).has_value());
    CHECK(check_signature("element", parse_param_values("I [ 1 2 ]")).has_value());
    CHECK_FALSE(check_signature("element", parse_param_values("I [ 1 X ] V")).has_value());
    CHECK(check_signature("weightedsum", bind_conventional_order("weightedsum", parse_param_values("[ { 1 X } ] 3 3")))
              .has_value());
  }

  TEST_CASE("deprecated weighted sum syntax and referenced variables") {
    CHECK(is_deprecated_weighted_sum(parse_param_values("[ [ 1 X ] [ 2 Y ] ]")));
    CHECK_FALSE(is_deprecated_weighted_sum(parse_param_values("[ { 1 X } ]")));
    CHECK(referenced_variables(parse_param_values("[ { 1 X } { 2 Y } { 3 X } ]")) ==
          std::vector<std::string>{"X", "Y"});
  }
}
