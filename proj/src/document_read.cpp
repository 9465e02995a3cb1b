#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "xcsp/document.hpp"
#include "xcsp/globals.hpp"
#include "xcsp/xml.hpp"

namespace xcsp {

std::string_view to_string(Notation n) noexcept { return n == Notation::tagged ? "tagged" : "abridged"; }

std::optional<Notation> notation_from_string(std::string_view text) noexcept {
  if (text == "tagged") return Notation::tagged;
  if (text == "abridged") return Notation::abridged;
  return std::nullopt;
}

namespace {

std::string trim(std::string_view s) {
  auto ws = [](char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; };
  while (!s.empty() && ws(s.front())) s.remove_prefix(1);
  while (!s.empty() && ws(s.back())) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

[[noreturn]] void lex_fail(const std::string& message, std::size_t offset) {
  throw Error("LexError", message, offset);
}

Token integer_token(std::string_view text, std::size_t offset) {
  auto tokens = lex_text(text, offset);
  if (tokens.size() != 1 || tokens[0].kind != TokenKind::integer)
    lex_fail("expected a single integer, got '" + trim(text) + "'", offset);
  return tokens[0];
}

std::size_t first_text_offset(const XmlNode& el) {
  for (const auto& c : el.children)
    if (c.is_text()) return c.offset;
  return el.offset;
}

// Turns the body of an element into one token stream. Tagged structural
// elements become the tokens of their abridged spelling so that a single
// set of micro-parsers serves both notations.
class Flattener {
public:
  std::vector<Token> run(const XmlNode& el) {
    body(el);
    return std::move(out_);
  }

private:
  std::vector<Token> out_;
  bool tuple_seen_ = false;

  void push(TokenKind kind, std::string lexeme, std::size_t offset) {
    Token t{kind, std::move(lexeme), offset};
    out_.push_back(std::move(t));
  }

  const std::string& required(const XmlNode& e, std::string_view key) {
    const std::string* v = e.attribute(key);
    if (!v) lex_fail("<" + e.name + "> needs a '" + std::string(key) + "' attribute", e.offset);
    return *v;
  }

  void body(const XmlNode& el) {
    for (const auto& c : el.children) {
      if (c.is_text()) {
        auto tokens = lex_text(c.text, c.offset);
        out_.insert(out_.end(), std::make_move_iterator(tokens.begin()), std::make_move_iterator(tokens.end()));
      } else {
        element(c);
      }
    }
  }

  void tuple(const XmlNode& e, const std::vector<Token>* cost) {
    if (tuple_seen_) push(TokenKind::pipe, "|", e.offset);
    tuple_seen_ = true;
    if (cost) {
      out_.insert(out_.end(), cost->begin(), cost->end());
      push(TokenKind::colon, ":", e.offset);
    }
    body(e);
  }

  void element(const XmlNode& e) {
    const std::string& n = e.name;
    if (n == "extension") return;
    if (n == "list") {
      push(TokenKind::lbracket, "[", e.offset);
      body(e);
      push(TokenKind::rbracket, "]", e.end ? e.end - 1 : e.offset);
    } else if (n == "dict") {
      push(TokenKind::lbrace, "{", e.offset);
      body(e);
      push(TokenKind::rbrace, "}", e.end ? e.end - 1 : e.offset);
    } else if (n == "entry") {
      const std::string& key = required(e, "key");
      if (!is_identifier(key)) lex_fail("invalid dictionary key '" + key + "'", e.offset);
      push(TokenKind::slash_key, key, e.offset);
      body(e);
    } else if (n == "i") {
      out_.push_back(integer_token(e.text_content(), first_text_offset(e)));
    } else if (n == "var") {
      const std::string& name = required(e, "name");
      if (!is_identifier(name)) lex_fail("invalid variable reference '" + name + "'", e.offset);
      push(TokenKind::identifier, name, e.offset);
    } else if (n == "interval") {
      out_.push_back(integer_token(required(e, "min"), e.offset));
      push(TokenKind::dotdot, "..", e.offset);
      out_.push_back(integer_token(required(e, "max"), e.offset));
    } else if (n == "parameter") {
      const std::string& type = required(e, "type");
      const std::string& name = required(e, "name");
      push(TokenKind::identifier, type, e.offset);
      push(TokenKind::identifier, name, e.offset);
    } else if (n == "tuple") {
      tuple(e, nullptr);
    } else if (n == "weight") {
      const std::string& value = required(e, "value");
      std::vector<Token> cost;
      if (trim(value) == "infinity")
        cost.push_back(Token{TokenKind::infinity, "infinity", e.offset});
      else
        cost.push_back(integer_token(value, e.offset));
      for (const auto& c : e.children) {
        if (c.is_text()) {
          if (!trim(c.text).empty()) lex_fail("text inside <weight> outside any <tuple>", c.offset);
        } else if (c.name == "tuple") {
          tuple(c, &cost);
        } else if (c.name != "extension") {
          lex_fail("unexpected <" + c.name + "> inside <weight>", c.offset);
        }
      }
    } else {
      if (e.has_element_children() || !trim(e.text_content()).empty())
        lex_fail("unexpected element <" + n + "> in body", e.offset);
      BodyPiece piece = ElementPiece{n, e.offset};
      auto tokens = lex_body(std::span<const BodyPiece>(&piece, 1));
      out_.insert(out_.end(), tokens.begin(), tokens.end());
    }
  }
};

std::vector<Token> tokens_of(const XmlNode& el) { return Flattener().run(el); }

struct NamedSite {
  std::string name;
  std::string path;
  std::size_t offset;
};

class Reader {
public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  LoadResult run() {
    LoadResult result;
    try {
      XmlNode root = parse_xml(bytes_);
      read_root(root);
    } catch (const Error& e) {
      error(e.code(), "/", e.has_offset() ? e.offset() : 0, e.what());
    }
    result.diagnostics = std::move(diags_);
    if (!has_errors(result.diagnostics)) result.instance = std::move(inst_);
    return result;
  }

private:
  std::string_view bytes_;
  std::vector<Diagnostic> diags_;
  Instance inst_;
  std::vector<NamedSite> names_;

  // -- diagnostics ---------------------------------------------------------

  void report(Severity s, std::string code, const std::string& path, std::size_t offset, std::string message) {
    offset = bytes_.empty() ? 0 : std::min(offset, bytes_.size() - 1);
    diags_.push_back(Diagnostic{s, std::move(code), Location{path, offset}, std::move(message)});
  }
  void error(std::string code, const std::string& path, std::size_t offset, std::string message) {
    report(Severity::error, std::move(code), path, offset, std::move(message));
  }
  void warning(std::string code, const std::string& path, std::size_t offset, std::string message) {
    report(Severity::warning, std::move(code), path, offset, std::move(message));
  }

  // Runs `f`; a thrown Error becomes a diagnostic. Offsets carried by the
  // error are relative to `base`.
  template <class F>
  bool lift(const std::string& path, const XmlNode& node, std::size_t base, F&& f) {
    try {
      f();
      return true;
    } catch (const Error& e) {
      error(e.code(), path, e.has_offset() ? base + e.offset() : node.offset, e.what());
      return false;
    }
  }

  std::string raw(const XmlNode& n) const { return std::string(bytes_.substr(n.offset, n.end - n.offset)); }

  static std::string child_path(const std::string& parent, const std::string& name, std::size_t index) {
    return parent + "/" + name + "[" + std::to_string(index) + "]";
  }

  // -- attribute helpers ---------------------------------------------------

  void check_attributes(const XmlNode& n, const std::string& path, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, v] : n.attributes)
      if (std::find(allowed.begin(), allowed.end(), k) == allowed.end())
        warning("UnknownAttribute", path, n.offset, "attribute '" + k + "' on <" + n.name + "> is not recognized");
  }

  const std::string* required(const XmlNode& n, const std::string& path, std::string_view key) {
    const std::string* v = n.attribute(key);
    if (!v) error("SchemaError", path, n.offset, "<" + n.name + "> is missing the '" + std::string(key) + "' attribute");
    return v;
  }

  std::optional<Int> int_attr(const XmlNode& n, const std::string& path, std::string_view key) {
    const std::string* v = n.attribute(key);
    if (!v) return std::nullopt;
    try {
      return integer_token(*v, 0).integer;
    } catch (const Error&) {
      error("InvalidAttribute", path, n.offset, "attribute '" + std::string(key) + "' must be an integer, got '" + *v + "'");
      return std::nullopt;
    }
  }

  std::optional<Cost> cost_attr(const XmlNode& n, const std::string& path, std::string_view key) {
    const std::string* v = n.attribute(key);
    if (!v) return std::nullopt;
    try {
      return Cost::parse(trim(*v));
    } catch (const Error& e) {
      error(e.code(), path, n.offset, "attribute '" + std::string(key) + "': " + e.what());
      return std::nullopt;
    }
  }

  void check_count(const XmlNode& n, const std::string& path, std::string_view key, std::size_t actual) {
    if (!n.attribute(key)) {
      warning("MissingCount", path, n.offset, "<" + n.name + "> has no '" + std::string(key) + "' attribute");
      return;
    }
    auto declared = int_attr(n, path, key);
    if (declared && *declared != static_cast<Int>(actual))
      error("CountMismatch", path, n.offset,
            std::string(key) + " declares " + std::to_string(*declared) + " but " + std::to_string(actual) + " found");
  }

  std::optional<std::string> name_attr(const XmlNode& n, const std::string& path) {
    const std::string* v = required(n, path, "name");
    if (!v) return std::nullopt;
    if (!is_identifier(*v)) {
      error("InvalidName", path, n.offset, "'" + *v + "' is not a valid identifier");
      return std::nullopt;
    }
    names_.push_back({*v, path, n.offset});
    return *v;
  }

  // Iterates element children of a section, collecting extensions and
  // warning about anything other than `item`.
  template <class F>
  std::size_t for_items(const XmlNode& section, const std::string& path, std::string_view item,
                        std::vector<std::string>& extensions, F&& f) {
    std::size_t count = 0;
    for (const XmlNode* c : section.elements()) {
      if (c->name == item) {
        ++count;
        f(*c, child_path(path, c->name, count));
      } else if (c->name == "extension") {
        extensions.push_back(raw(*c));
      } else {
        warning("UnknownElement", path, c->offset, "element <" + c->name + "> is not recognized here");
      }
    }
    for (const auto& c : section.children)
      if (c.is_text() && !trim(c.text).empty())
        warning("UnexpectedText", path, c.offset, "text inside <" + section.name + "> is ignored");
    return count;
  }

  // -- document ------------------------------------------------------------

  void read_root(const XmlNode& root) {
    const std::string path = "/instance";
    if (root.name != "instance") {
      error("SchemaError", "/" + root.name, root.offset, "root element must be <instance>");
      return;
    }
    check_attributes(root, path, {});
    std::map<std::string, const XmlNode*, std::less<>> sections;
    static constexpr std::string_view known[] = {"presentation", "domains",     "variables",  "relations",
                                                 "predicates",   "functions",   "constraints", "quantification"};
    for (const XmlNode* c : root.elements()) {
      if (c->name == "extension") {
        inst_.extensions.push_back(raw(*c));
      } else if (std::find(std::begin(known), std::end(known), c->name) == std::end(known)) {
        warning("UnknownElement", path, c->offset, "element <" + c->name + "> is not recognized here");
      } else if (!sections.emplace(c->name, c).second) {
        error("DuplicateSection", path + "/" + c->name, c->offset, "<" + c->name + "> appears more than once");
      }
    }
    auto section = [&](std::string_view name, bool mandatory) -> const XmlNode* {
      auto it = sections.find(name);
      if (it != sections.end()) return it->second;
      if (mandatory)
        error("SchemaError", path, root.offset, "<instance> has no <" + std::string(name) + "> element");
      return nullptr;
    };

    if (auto* n = section("presentation", true)) read_presentation(*n);
    if (auto* n = section("domains", true)) read_domains(*n);
    if (auto* n = section("variables", true)) read_variables(*n);
    if (auto* n = section("relations", false)) read_relations(*n);
    if (auto* n = section("predicates", false)) read_predicates(*n);
    if (auto* n = section("functions", false)) read_functions(*n);
    if (auto* n = section("constraints", true)) read_constraints(*n);
    if (auto* n = section("quantification", false)) read_quantification(*n);
    check_unique_names();
  }

  void read_presentation(const XmlNode& n) {
    const std::string path = "/instance/presentation";
    auto& p = inst_.presentation;
    check_attributes(n, path,
                     {"name", "maxConstraintArity", "minViolatedConstraints", "nbSolutions", "solution",
                      "maxSatisfiableConstraints", "type", "format"});
    if (const std::string* v = n.attribute("name")) {
      p.name = *v;
      if (is_identifier(*v))
        names_.push_back({*v, path, n.offset});
      else if (*v != "?")
        warning("InvalidPresentationName", path, n.offset, "presentation name '" + *v + "' is not an identifier");
    }
    p.max_constraint_arity = int_attr(n, path, "maxConstraintArity");
    for (auto [key, slot] : {std::pair{"minViolatedConstraints", &p.min_violated_constraints},
                             std::pair{"nbSolutions", &p.nb_solutions}}) {
      if (const std::string* v = n.attribute(key)) {
        *slot = CountClaim::parse(*v);
        if (!*slot) error("InvalidAttribute", path, n.offset, std::string(key) + " value '" + *v + "' is not understood");
      }
    }
    if (const std::string* v = n.attribute("solution")) p.solution = *v;
    if (const std::string* v = n.attribute("maxSatisfiableConstraints")) {
      p.max_satisfiable_constraints = *v;
      warning("DeprecatedAttribute", path, n.offset, "maxSatisfiableConstraints is deprecated and not interpreted");
    }
    if (const std::string* v = n.attribute("type")) {
      p.declared_type = instance_type_from_string(trim(*v));
      if (!p.declared_type) error("InvalidAttribute", path, n.offset, "unknown instance type '" + *v + "'");
    }
    if (const std::string* v = required(n, path, "format")) {
      p.format = *v;
      if (*v != "XCSP 2.1") error("UnsupportedFormat", path, n.offset, "format must be 'XCSP 2.1', got '" + *v + "'");
    }
    p.description = trim(n.text_content());
    for (const XmlNode* c : n.elements()) {
      if (c->name == "extension")
        p.extensions.push_back(raw(*c));
      else
        warning("UnknownElement", path, c->offset, "element <" + c->name + "> is not recognized here");
    }
  }

  // Extensions nested directly in an entity element.
  std::vector<std::string> entity_extensions(const XmlNode& n) {
    std::vector<std::string> out;
    for (const XmlNode* c : n.elements("extension")) out.push_back(raw(*c));
    return out;
  }

  void read_domains(const XmlNode& section) {
    const std::string path = "/instance/domains";
    check_attributes(section, path, {"nbDomains"});
    auto count = for_items(section, path, "domain", inst_.section_extensions.domains,
                           [&](const XmlNode& n, const std::string& p) {
                             check_attributes(n, p, {"name", "nbValues"});
                             DomainDef d;
                             auto name = name_attr(n, p);
                             d.extensions = entity_extensions(n);
                             const bool ok = lift(p, n, 0, [&] {
                               auto parsed = parse_domain_values(tokens_of(n));
                               d.pieces = std::move(parsed.pieces);
                               d.values = std::move(parsed.values);
                             });
                             if (ok) check_count(n, p, "nbValues", d.values.size());
                             if (name) {
                               d.name = *name;
                               inst_.domains.push_back(std::move(d));
                             }
                           });
    check_count(section, path, "nbDomains", count);
  }

  void read_variables(const XmlNode& section) {
    const std::string path = "/instance/variables";
    check_attributes(section, path, {"nbVariables"});
    auto count = for_items(section, path, "variable", inst_.section_extensions.variables,
                           [&](const XmlNode& n, const std::string& p) {
                             check_attributes(n, p, {"name", "domain"});
                             VariableDef v;
                             auto name = name_attr(n, p);
                             if (const std::string* dom = required(n, p, "domain")) {
                               v.domain = *dom;
                               if (!inst_.find_domain(*dom))
                                 error("UnknownDomain", p, n.offset, "domain '" + *dom + "' is not defined");
                             }
                             v.extensions = entity_extensions(n);
                             if (name) {
                               v.name = *name;
                               inst_.variables.push_back(std::move(v));
                             }
                           });
    check_count(section, path, "nbVariables", count);
  }

  void read_relations(const XmlNode& section) {
    const std::string path = "/instance/relations";
    check_attributes(section, path, {"nbRelations"});
    auto count = for_items(section, path, "relation", inst_.section_extensions.relations,
                           [&](const XmlNode& n, const std::string& p) { read_relation(n, p); });
    check_count(section, path, "nbRelations", count);
  }

  void read_relation(const XmlNode& n, const std::string& p) {
    check_attributes(n, p, {"name", "arity", "nbTuples", "semantics", "defaultCost"});
    Relation r;
    auto name = name_attr(n, p);
    r.extensions = entity_extensions(n);
    bool ok = true;
    if (required(n, p, "arity")) {
      auto arity = int_attr(n, p, "arity");
      if (arity && (*arity < 1 || *arity > 1'000'000)) {
        error("InvalidAttribute", p, n.offset, "relation arity must be a positive integer");
        arity.reset();
      }
      if (arity)
        r.arity = static_cast<int>(*arity);
      else
        ok = false;
    } else {
      ok = false;
    }
    if (const std::string* sem = required(n, p, "semantics")) {
      const std::string s = trim(*sem);
      if (s == "supports") r.semantics = RelationSemantics::supports;
      else if (s == "conflicts") r.semantics = RelationSemantics::conflicts;
      else if (s == "soft") r.semantics = RelationSemantics::soft;
      else {
        error("InvalidAttribute", p, n.offset, "semantics must be supports, conflicts or soft, got '" + *sem + "'");
        ok = false;
      }
    } else {
      ok = false;
    }
    if (ok && r.soft()) {
      if (!n.attribute("defaultCost"))
        error("SchemaError", p, n.offset, "soft relation needs a defaultCost attribute");
      r.default_cost = cost_attr(n, p, "defaultCost");
    } else if (ok && n.attribute("defaultCost")) {
      warning("IgnoredAttribute", p, n.offset, "defaultCost only applies to soft relations");
    }
    if (ok) {
      const bool parsed = lift(p, n, 0, [&] {
        auto tokens = tokens_of(n);
        if (r.soft()) {
          for (auto& wt : parse_weighted_tuples(tokens, r.arity)) {
            r.costs.push_back(wt.cost);
            r.tuples.push_back(std::move(wt.tuple));
          }
        } else {
          r.tuples = parse_tuples(tokens, r.arity);
        }
      });
      if (parsed) check_count(n, p, "nbTuples", r.tuples.size());
    }
    if (name) {
      r.name = *name;
      inst_.relations.push_back(std::move(r));
    }
  }

  // Shared by predicates and cost functions.
  template <class Def>
  void read_callable(const XmlNode& n, const std::string& p, Def& def) {
    const auto params = n.elements("parameters");
    const auto exprs = n.elements("expression");
    for (const XmlNode* c : n.elements())
      if (c->name != "parameters" && c->name != "expression" && c->name != "extension")
        warning("UnknownElement", p, c->offset, "element <" + c->name + "> is not recognized here");
    if (params.size() != 1) {
      error("SchemaError", p, n.offset, "<" + n.name + "> needs exactly one <parameters> element");
    } else {
      lift(p + "/parameters", *params[0], 0, [&] { def.formals = parse_formal_parameters(tokens_of(*params[0])); });
    }
    if (exprs.size() != 1) {
      error("SchemaError", p, n.offset, "<" + n.name + "> needs exactly one <expression> element");
      return;
    }
    const XmlNode& expr = *exprs[0];
    const std::string epath = p + "/expression";
    const XmlNode* functional = nullptr;
    for (const XmlNode* c : expr.elements()) {
      if (c->name == "functional") {
        if (functional)
          error("SchemaError", epath, c->offset, "more than one <functional> representation");
        else
          functional = c;
      } else if (c->name == "math" || c->name == "postfix" || c->name == "infix") {
        def.other_representations.push_back(raw(*c));
        warning("UnsupportedRepresentation", epath, c->offset,
                "<" + c->name + "> representation is kept verbatim but not interpreted");
      } else {
        warning("UnknownElement", epath, c->offset, "element <" + c->name + "> is not recognized here");
      }
    }
    if (!functional) {
      error("MissingFunctional", epath, expr.offset, "expression has no <functional> representation");
      return;
    }
    if (functional->has_element_children())
      warning("UnexpectedElement", epath, functional->offset, "elements inside <functional> are ignored");
    const std::size_t base = first_text_offset(*functional);
    lift(epath + "/functional", *functional, base, [&] { def.body = parse_functional(functional->text_content()); });
  }

  void read_predicates(const XmlNode& section) {
    const std::string path = "/instance/predicates";
    check_attributes(section, path, {"nbPredicates"});
    auto count = for_items(section, path, "predicate", inst_.section_extensions.predicates,
                           [&](const XmlNode& n, const std::string& p) {
                             check_attributes(n, p, {"name"});
                             PredicateDef d;
                             auto name = name_attr(n, p);
                             d.extensions = entity_extensions(n);
                             read_callable(n, p, d);
                             if (name) {
                               d.name = *name;
                               inst_.predicates.push_back(std::move(d));
                             }
                           });
    check_count(section, path, "nbPredicates", count);
  }

  void read_functions(const XmlNode& section) {
    const std::string path = "/instance/functions";
    check_attributes(section, path, {"nbFunctions"});
    auto count = for_items(section, path, "function", inst_.section_extensions.functions,
                           [&](const XmlNode& n, const std::string& p) {
                             check_attributes(n, p, {"name", "return"});
                             CostFunctionDef d;
                             auto name = name_attr(n, p);
                             if (const std::string* ret = required(n, p, "return")) {
                               d.return_type = trim(*ret);
                               if (d.return_type != "int")
                                 error("UnsupportedReturnType", p, n.offset,
                                       "cost functions must return int, got '" + *ret + "'");
                             }
                             d.extensions = entity_extensions(n);
                             read_callable(n, p, d);
                             if (name) {
                               d.name = *name;
                               inst_.functions.push_back(std::move(d));
                             }
                           });
    check_count(section, path, "nbFunctions", count);
  }

  void read_constraints(const XmlNode& section) {
    const std::string path = "/instance/constraints";
    check_attributes(section, path, {"nbConstraints", "initialCost", "maximalCost"});
    inst_.maximal_cost = cost_attr(section, path, "maximalCost");
    inst_.initial_cost = cost_attr(section, path, "initialCost");
    auto count = for_items(section, path, "constraint", inst_.section_extensions.constraints,
                           [&](const XmlNode& n, const std::string& p) {
                             if (auto c = read_constraint(n, p)) inst_.constraints.push_back(std::move(*c));
                           });
    check_count(section, path, "nbConstraints", count);
  }

  std::optional<ConstraintDef> read_constraint(const XmlNode& n, const std::string& p) {
    check_attributes(n, p, {"name", "arity", "scope", "reference"});
    ConstraintDef c;
    auto name = name_attr(n, p);
    bool ok = name.has_value();
    if (n.attribute("arity")) {
      auto arity = int_attr(n, p, "arity");
      if (arity) c.declared_arity = static_cast<int>(std::clamp<Int>(*arity, -1, 1'000'000));
    }
    if (const std::string* scope = required(n, p, "scope")) {
      for (auto& v : split_ws(*scope)) {
        if (!is_identifier(v)) {
          error("InvalidScope", p, n.offset, "scope entry '" + v + "' is not an identifier");
          ok = false;
        } else if (!inst_.find_variable(v)) {
          error("UnknownVariable", p, n.offset, "scope variable '" + v + "' is not declared");
          ok = false;
        }
        c.scope.push_back(v);
      }
      if (c.scope.empty()) {
        error("EmptyScope", p, n.offset, "constraint scope is empty");
        ok = false;
      }
    } else {
      ok = false;
    }
    c.extensions = entity_extensions(n);

    const auto params = n.elements("parameters");
    for (const XmlNode* e : n.elements())
      if (e->name != "parameters" && e->name != "extension")
        warning("UnknownElement", p, e->offset, "element <" + e->name + "> is not recognized here");
    if (params.size() > 1) {
      error("SchemaError", p, n.offset, "constraint has more than one <parameters> element");
      return std::nullopt;
    }
    const XmlNode* param_node = params.empty() ? nullptr : params[0];
    const std::string ppath = p + "/parameters";

    const std::string* ref = required(n, p, "reference");
    if (!ref) return std::nullopt;
    c.reference = trim(*ref);

    if (c.is_global()) {
      const std::string gname = c.global_name();
      if (!find_global(gname))
        warning("UnknownGlobal", p, n.offset, "global constraint '" + gname + "' is not recognized");
      GlobalParams body;
      if (!param_node) {
        if (gname == "alldifferent") {
          error("DeprecatedImplicitParameters", p, n.offset,
                "allDifferent needs an explicit <parameters> list; the implicit form is deprecated");
          ok = false;
        }
      } else {
        ok &= lift(ppath, *param_node, 0, [&] {
          body.params = parse_param_values(tokens_of(*param_node));
          if (gname == "weightedsum" && is_deprecated_weighted_sum(body.params))
            throw Error("DeprecatedWeightedSumSyntax",
                        "weightedSum takes a list of {coef var} dictionaries; the list-of-lists form is deprecated",
                        param_node->offset);
          body.params = bind_conventional_order(gname, std::move(body.params));
        });
      }
      c.body = std::move(body);
    } else if (inst_.find_relation(c.reference)) {
      if (param_node) {
        error("UnexpectedParameters", ppath, param_node->offset, "a constraint in extension takes no parameters");
        ok = false;
      }
      c.body = ExtensionRef{};
    } else if (const std::vector<FormalParam>* formals = formals_of(c.reference)) {
      IntensionParams body;
      if (param_node) {
        ok &= lift(ppath, *param_node, 0, [&] { body.params = parse_effective_parameters(tokens_of(*param_node)); });
      } else if (formals->size() == c.scope.size()) {
        warning("ImplicitParameters", p, n.offset, "no <parameters>; the scope is used as effective parameters");
        for (const auto& v : c.scope) body.params.push_back(VarRef{v});
      } else {
        error("MissingParameters", p, n.offset, "'" + c.reference + "' expects " + std::to_string(formals->size()) +
                                                    " effective parameters but none are given");
        ok = false;
      }
      c.body = std::move(body);
    } else {
      error("UnknownReference", p, n.offset, "reference '" + c.reference + "' names no relation, predicate or function");
      ok = false;
    }
    if (!ok) return std::nullopt;
    c.name = *name;
    return c;
  }

  const std::vector<FormalParam>* formals_of(std::string_view name) const {
    if (auto* pd = inst_.find_predicate(name)) return &pd->formals;
    if (auto* fd = inst_.find_function(name)) return &fd->formals;
    return nullptr;
  }

  void read_quantification(const XmlNode& section) {
    const std::string path = "/instance/quantification";
    check_attributes(section, path, {"nbBlocks"});
    std::vector<QuantBlock> blocks;
    auto count = for_items(section, path, "block", inst_.section_extensions.quantification,
                           [&](const XmlNode& n, const std::string& p) {
                             check_attributes(n, p, {"quantifier", "scope"});
                             QuantBlock b;
                             if (const std::string* q = required(n, p, "quantifier")) {
                               const std::string s = trim(*q);
                               if (s == "exists" || s == "forall") {
                                 b.quantifier = s == "exists" ? Quantifier::exists : Quantifier::forall;
                               } else if (s == "existential" || s == "universal") {
                                 b.quantifier = s == "existential" ? Quantifier::exists : Quantifier::forall;
                                 warning("QuantifierSpelling", p, n.offset,
                                         "quantifier '" + s + "' read as '" + std::string(to_string(b.quantifier)) + "'");
                               } else {
                                 error("InvalidAttribute", p, n.offset, "unknown quantifier '" + s + "'");
                               }
                             }
                             if (const std::string* scope = required(n, p, "scope")) {
                               b.scope = split_ws(*scope);
                               if (b.scope.empty()) error("EmptyScope", p, n.offset, "block scope is empty");
                               for (const auto& v : b.scope)
                                 if (!inst_.find_variable(v))
                                   error("UnknownVariable", p, n.offset, "block variable '" + v + "' is not declared");
                             }
                             std::size_t k = 0;
                             for (const XmlNode* c : n.elements()) {
                               if (c->name == "constraint") {
                                 if (auto con = read_constraint(*c, child_path(p, "constraint", ++k)))
                                   b.restrictions.push_back(std::move(*con));
                               } else if (c->name == "extension") {
                                 b.extensions.push_back(raw(*c));
                               } else {
                                 warning("UnknownElement", p, c->offset,
                                         "element <" + c->name + "> is not recognized here");
                               }
                             }
                             blocks.push_back(std::move(b));
                           });
    check_count(section, path, "nbBlocks", count);
    inst_.quantification = std::move(blocks);
  }

  void check_unique_names() {
    std::map<std::string, const NamedSite*, std::less<>> seen;
    for (const auto& site : names_) {
      auto [it, fresh] = seen.emplace(site.name, &site);
      if (!fresh)
        error("DuplicateName", site.path, site.offset,
              "name '" + site.name + "' is already used at " + it->second->path);
    }
  }
};

}  // namespace

LoadResult load_instance(std::string_view bytes) { return Reader(bytes).run(); }

std::string convert(std::string_view bytes, Notation target) {
  auto result = load_instance(bytes);
  if (!result.ok()) {
    for (const auto& d : result.diagnostics)
      if (d.severity == Severity::error)
        throw Error("LoadFailed", d.code + " at " + d.location.path + ": " + d.message, d.location.offset);
    throw Error("LoadFailed", "instance could not be loaded");
  }
  return write_instance(*result.instance, target);
}

}  // namespace xcsp
