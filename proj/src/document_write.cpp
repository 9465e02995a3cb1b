#include <functional>

#include "xcsp/document.hpp"
#include "xcsp/globals.hpp"
#include "xcsp/xml.hpp"

namespace xcsp {

namespace {

using Attrs = std::vector<std::pair<std::string_view, std::string>>;

constexpr std::size_t tuples_per_line = 20;

std::string join(const std::vector<std::string>& items, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string tagged_int(Int v) { return "<i>" + std::to_string(v) + "</i>"; }

std::string tagged_var(std::string_view name) { return "<var name=\"" + xml_escape(name, true) + "\"/>"; }

std::string atom_element(RelOp op) { return "<" + std::string(to_string(op)) + "/>"; }

std::string render_param(const ParamValue& v, Notation notation) {
  const bool tagged = notation == Notation::tagged;
  if (v.is_int()) return tagged ? tagged_int(v.as_int()) : std::to_string(v.as_int());
  if (v.is_var()) return tagged ? tagged_var(v.as_var().name) : v.as_var().name;
  if (v.is_atom()) return atom_element(v.as_atom());
  if (v.is_nil()) return "<nil/>";
  if (v.is_infinity()) return "<infinity/>";
  std::vector<std::string> parts;
  if (v.is_list()) {
    for (const auto& item : v.as_list().items) parts.push_back(render_param(item, notation));
    return tagged ? "<list>" + join(parts) + "</list>" : "[" + join(parts) + "]";
  }
  const auto& d = v.as_dict();
  const bool positional = !d.keyed() || (!tagged && d.positional);
  for (const auto& e : d.entries) {
    std::string value = render_param(e.value, notation);
    if (positional)
      parts.push_back(std::move(value));
    else if (tagged)
      parts.push_back("<entry key=\"" + xml_escape(e.key, true) + "\">" + value + "</entry>");
    else
      parts.push_back("/" + e.key + " " + value);
  }
  return tagged ? "<dict>" + join(parts) + "</dict>" : "{" + join(parts) + "}";
}

class Writer {
public:
  Writer(const Instance& inst, Notation notation) : inst_(inst), notation_(notation) {}

  std::string run() {
    out_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    open("instance", {});
    presentation();
    domains();
    variables();
    relations();
    predicates();
    functions();
    constraints();
    quantification();
    raw_lines(inst_.extensions);
    close("instance");
    return std::move(out_);
  }

private:
  const Instance& inst_;
  Notation notation_;
  std::string out_;
  int depth_ = 0;

  bool tagged() const noexcept { return notation_ == Notation::tagged; }

  void line(std::string_view text) {
    out_.append(static_cast<std::size_t>(depth_) * 2, ' ');
    out_ += text;
    out_ += '\n';
  }

  static std::string tag(std::string_view name, const Attrs& attrs) {
    std::string s = "<" + std::string(name);
    for (const auto& [k, v] : attrs) s += " " + std::string(k) + "=\"" + xml_escape(v, true) + "\"";
    return s;
  }

  void open(std::string_view name, const Attrs& attrs) {
    line(tag(name, attrs) + ">");
    ++depth_;
  }

  void close(std::string_view name) {
    --depth_;
    line("</" + std::string(name) + ">");
  }

  void raw_lines(const std::vector<std::string>& fragments) {
    for (const auto& f : fragments) line(f);
  }

  // Emits an element whose body is `body` (already escaped markup),
  // followed by nested children and preserved extensions.
  void element(std::string_view name, const Attrs& attrs, const std::string& body,
               const std::vector<std::string>& extensions = {}, const std::function<void()>& nested = {}) {
    const bool multiline = body.find('\n') != std::string::npos;
    if (extensions.empty() && !nested && !multiline) {
      if (body.empty())
        line(tag(name, attrs) + "/>");
      else
        line(tag(name, attrs) + ">" + body + "</" + std::string(name) + ">");
      return;
    }
    open(name, attrs);
    std::size_t start = 0;
    while (start < body.size()) {
      auto end = body.find('\n', start);
      if (end == std::string::npos) end = body.size();
      if (end > start) line(std::string_view(body).substr(start, end - start));
      start = end + 1;
    }
    if (nested) nested();
    raw_lines(extensions);
    close(name);
  }

  // -- sections --------------------------------------------------------------

  void presentation() {
    const auto& p = inst_.presentation;
    Attrs a;
    if (p.name) a.emplace_back("name", *p.name);
    if (p.max_constraint_arity) a.emplace_back("maxConstraintArity", std::to_string(*p.max_constraint_arity));
    if (p.min_violated_constraints) a.emplace_back("minViolatedConstraints", p.min_violated_constraints->to_string());
    if (p.nb_solutions) a.emplace_back("nbSolutions", p.nb_solutions->to_string());
    if (p.solution) a.emplace_back("solution", *p.solution);
    if (p.max_satisfiable_constraints) a.emplace_back("maxSatisfiableConstraints", *p.max_satisfiable_constraints);
    if (p.declared_type) a.emplace_back("type", std::string(to_string(*p.declared_type)));
    a.emplace_back("format", p.format);
    if (p.extensions.empty()) {
      element("presentation", a, xml_escape(p.description));
    } else {
      line(tag("presentation", a) + ">" + xml_escape(p.description));
      ++depth_;
      raw_lines(p.extensions);
      close("presentation");
    }
  }

  std::string domain_body(const DomainDef& d) const {
    std::vector<std::string> parts;
    for (const auto& piece : d.pieces) {
      if (tagged())
        parts.push_back(piece.interval ? "<interval min=\"" + std::to_string(piece.min) + "\" max=\"" +
                                             std::to_string(piece.max) + "\"/>"
                                       : tagged_int(piece.min));
      else
        parts.push_back(piece.interval ? std::to_string(piece.min) + ".." + std::to_string(piece.max)
                                       : std::to_string(piece.min));
    }
    return join(parts);
  }

  void domains() {
    open("domains", {{"nbDomains", std::to_string(inst_.domains.size())}});
    for (const auto& d : inst_.domains)
      element("domain", {{"name", d.name}, {"nbValues", std::to_string(d.values.size())}}, domain_body(d),
              d.extensions);
    raw_lines(inst_.section_extensions.domains);
    close("domains");
  }

  void variables() {
    open("variables", {{"nbVariables", std::to_string(inst_.variables.size())}});
    for (const auto& v : inst_.variables) element("variable", {{"name", v.name}, {"domain", v.domain}}, "", v.extensions);
    raw_lines(inst_.section_extensions.variables);
    close("variables");
  }

  std::string tagged_tuple(const Tuple& t) const {
    std::vector<std::string> parts;
    for (Int v : t) parts.push_back(tagged_int(v));
    return "<tuple>" + join(parts) + "</tuple>";
  }

  void relation(const Relation& r) {
    Attrs a{{"name", r.name},
            {"arity", std::to_string(r.arity)},
            {"nbTuples", std::to_string(r.tuples.size())},
            {"semantics", std::string(to_string(r.semantics))}};
    if (r.soft() && r.default_cost) a.emplace_back("defaultCost", r.default_cost->to_string());

    if (!tagged()) {
      std::string body;
      if (r.soft()) {
        std::vector<WeightedTuple> wts;
        for (std::size_t i = 0; i < r.tuples.size(); ++i) wts.push_back({r.costs[i], r.tuples[i]});
        body = format_weighted_tuples(wts, tuples_per_line);
      } else {
        body = format_tuples(r.tuples, tuples_per_line);
      }
      element("relation", a, body, r.extensions);
      return;
    }
    if (r.tuples.empty()) {
      element("relation", a, "", r.extensions);
      return;
    }
    element("relation", a, "", r.extensions, [&] {
      if (!r.soft()) {
        for (const auto& t : r.tuples) line(tagged_tuple(t));
        return;
      }
      std::size_t i = 0;
      while (i < r.tuples.size()) {
        std::size_t j = i;
        while (j < r.tuples.size() && r.costs[j] == r.costs[i]) ++j;
        open("weight", {{"value", r.costs[i].to_string()}});
        for (std::size_t k = i; k < j; ++k) line(tagged_tuple(r.tuples[k]));
        close("weight");
        i = j;
      }
    });
  }

  void relations() {
    if (inst_.relations.empty() && inst_.section_extensions.relations.empty()) return;
    open("relations", {{"nbRelations", std::to_string(inst_.relations.size())}});
    for (const auto& r : inst_.relations) relation(r);
    raw_lines(inst_.section_extensions.relations);
    close("relations");
  }

  std::string formals_body(const std::vector<FormalParam>& formals) const {
    std::vector<std::string> parts;
    for (const auto& f : formals)
      parts.push_back(tagged() ? "<parameter name=\"" + xml_escape(f.name, true) + "\" type=\"" +
                                     xml_escape(f.type, true) + "\"/>"
                               : f.type + " " + f.name);
    return join(parts);
  }

  template <class Def>
  void callable_children(const Def& d) {
    element("parameters", {}, formals_body(d.formals));
    open("expression", {});
    if (d.body) line("<functional>" + xml_escape(print_functional(*d.body)) + "</functional>");
    raw_lines(d.other_representations);
    close("expression");
  }

  void predicates() {
    if (inst_.predicates.empty() && inst_.section_extensions.predicates.empty()) return;
    open("predicates", {{"nbPredicates", std::to_string(inst_.predicates.size())}});
    for (const auto& d : inst_.predicates)
      element("predicate", {{"name", d.name}}, "", d.extensions, [&] { callable_children(d); });
    raw_lines(inst_.section_extensions.predicates);
    close("predicates");
  }

  void functions() {
    if (inst_.functions.empty() && inst_.section_extensions.functions.empty()) return;
    open("functions", {{"nbFunctions", std::to_string(inst_.functions.size())}});
    for (const auto& d : inst_.functions)
      element("function", {{"name", d.name}, {"return", d.return_type}}, "", d.extensions,
              [&] { callable_children(d); });
    raw_lines(inst_.section_extensions.functions);
    close("functions");
  }

  std::string constraint_params(const ConstraintDef& c) const {
    std::vector<std::string> parts;
    if (const auto* ip = std::get_if<IntensionParams>(&c.body)) {
      for (const auto& p : ip->params) {
        if (const auto* v = std::get_if<Int>(&p))
          parts.push_back(tagged() ? tagged_int(*v) : std::to_string(*v));
        else
          parts.push_back(tagged() ? tagged_var(std::get<VarRef>(p).name) : std::get<VarRef>(p).name);
      }
    } else if (const auto* gp = std::get_if<GlobalParams>(&c.body)) {
      auto params = tagged() ? to_keyed_form(gp->params) : to_conventional_order(c.global_name(), gp->params);
      for (const auto& p : params) parts.push_back(render_param(p, notation_));
    }
    return join(parts);
  }

  void constraint(const ConstraintDef& c) {
    Attrs a{{"name", c.name},
            {"arity", std::to_string(c.arity())},
            {"scope", join(c.scope)},
            {"reference", c.reference}};
    const std::string params = constraint_params(c);
    if (params.empty()) {
      element("constraint", a, "", c.extensions);
      return;
    }
    element("constraint", a, "", c.extensions, [&] { element("parameters", {}, params); });
  }

  void constraints() {
    Attrs a{{"nbConstraints", std::to_string(inst_.constraints.size())}};
    if (inst_.initial_cost) a.emplace_back("initialCost", inst_.initial_cost->to_string());
    if (inst_.maximal_cost) a.emplace_back("maximalCost", inst_.maximal_cost->to_string());
    open("constraints", a);
    for (const auto& c : inst_.constraints) constraint(c);
    raw_lines(inst_.section_extensions.constraints);
    close("constraints");
  }

  void quantification() {
    if (!inst_.quantification) return;
    const auto& blocks = *inst_.quantification;
    open("quantification", {{"nbBlocks", std::to_string(blocks.size())}});
    for (const auto& b : blocks) {
      Attrs a{{"quantifier", std::string(to_string(b.quantifier))}, {"scope", join(b.scope)}};
      if (b.restrictions.empty())
        element("block", a, "", b.extensions);
      else
        element("block", a, "", b.extensions, [&] {
          for (const auto& c : b.restrictions) constraint(c);
        });
    }
    raw_lines(inst_.section_extensions.quantification);
    close("quantification");
  }
};

}  // namespace

std::string write_instance(const Instance& instance, Notation notation) { return Writer(instance, notation).run(); }

}  // namespace xcsp
