#include "xcsp/stats.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <map>

#include "json.hpp"
#include "xcsp/globals.hpp"

namespace xcsp {

InstanceStats compute_stats(const Instance& instance) {
  InstanceStats s;
  s.type = instance.type();
  s.domains = instance.domains.size();
  s.variables = instance.variables.size();
  s.relations = instance.relations.size();
  s.predicates = instance.predicates.size();
  s.functions = instance.functions.size();
  s.constraints = instance.constraints.size();

  boost::multiprecision::cpp_int space = 1;
  for (const auto& v : instance.variables) {
    const DomainDef* d = instance.find_domain(v.domain);
    space *= d ? d->size() : 0;
  }
  s.search_space = space.str();

  std::map<std::string, std::size_t> globals;
  for (const auto& c : instance.constraints) {
    s.max_arity = std::max(s.max_arity, static_cast<std::size_t>(c.arity()));
    if (!c.is_global()) continue;
    const GlobalInfo* info = find_global(c.global_name());
    ++globals[info ? std::string(info->display) : c.reference.substr(7)];
  }
  s.globals.assign(globals.begin(), globals.end());

  if (const auto& declared = instance.presentation.max_constraint_arity;
      declared && *declared != static_cast<Int>(s.max_arity))
    s.warnings.push_back({Severity::warning, "MaxArityMismatch", {"/instance/presentation", 0},
                          "maxConstraintArity is " + std::to_string(*declared) + " but the greatest constraint arity is " +
                              std::to_string(s.max_arity)});
  return s;
}

std::string stats_json(const InstanceStats& s) {
  nlohmann::ordered_json j;
  j["type"] = std::string(to_string(s.type));
  j["domains"] = s.domains;
  j["variables"] = s.variables;
  j["relations"] = s.relations;
  j["predicates"] = s.predicates;
  j["functions"] = s.functions;
  j["constraints"] = s.constraints;
  j["maxArity"] = s.max_arity;
  j["space"] = s.search_space;
  j["globals"] = nlohmann::ordered_json::object();
  for (const auto& [name, n] : s.globals) j["globals"][name] = n;
  j["warnings"] = nlohmann::ordered_json::array();
  for (const auto& w : s.warnings) j["warnings"].push_back({{"code", w.code}, {"message", w.message}});
  return j.dump();
}

std::string stats_text(const InstanceStats& s) {
  std::string out;
  auto line = [&](const std::string& key, const std::string& value) { out += key + "=" + value + "\n"; };
  line("type", std::string(to_string(s.type)));
  line("domains", std::to_string(s.domains));
  line("variables", std::to_string(s.variables));
  line("relations", std::to_string(s.relations));
  line("predicates", std::to_string(s.predicates));
  line("functions", std::to_string(s.functions));
  line("constraints", std::to_string(s.constraints));
  line("maxArity", std::to_string(s.max_arity));
  line("space", s.search_space);
  std::string globals;
  for (const auto& [name, n] : s.globals) globals += (globals.empty() ? "" : " ") + name + ":" + std::to_string(n);
  line("globals", globals);
  return out;
}

}  // namespace xcsp
