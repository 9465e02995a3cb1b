#pragma once
// Helpers shared by the unit and acceptance suites: fixture access, naive
// reference evaluators written independently of the library, and a seeded
// generator of small random instances.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xcsp/document.hpp"

namespace support {

using Int = std::int64_t;

inline const std::vector<std::string>& fixture_names() {
  static const std::vector<std::string> names = {
      "queens-extension.xml", "queens-intension.xml", "test-extension.xml", "test-intension.xml",
      "magic-square.xml",     "qcsp-example.xml",     "qcsp-plus-example.xml", "wcsp-example.xml",
  };
  return names;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string fixture_path(const std::string& name) { return std::string(XCSP21_FIXTURE_DIR) + "/" + name; }
inline std::string fixture_text(const std::string& name) { return read_file(fixture_path(name)); }

inline xcsp::Instance load_text(const std::string& text) {
  auto r = xcsp::load_instance(text);
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += d.code + ": " + d.message + "\n";
    throw std::runtime_error("load failed:\n" + msg);
  }
  return std::move(*r.instance);
}

inline xcsp::Instance load_fixture(const std::string& name) { return load_text(fixture_text(name)); }

/// Replaces the first occurrence of `from`; throws when absent so a stale
/// mutation cannot pass silently.
inline std::string replace_once(std::string text, const std::string& from, const std::string& to) {
  const auto at = text.find(from);
  if (at == std::string::npos) throw std::runtime_error("mutation anchor not found: " + from);
  return text.replace(at, from.size(), to);
}

// ---------------------------------------------------------------------------
// Naive oracles

/// Solutions of n-queens counted over permutations with a diagonal test.
inline int queens_oracle(int n) {
  std::vector<int> q(n);
  for (int i = 0; i < n; ++i) q[i] = i;
  int count = 0;
  do {
    bool ok = true;
    for (int i = 0; i < n && ok; ++i)
      for (int j = i + 1; j < n && ok; ++j) ok = std::abs(q[i] - q[j]) != j - i;
    count += ok;
  } while (std::next_permutation(q.begin(), q.end()));
  return count;
}

/// 3x3 magic squares over 1..9, counted over all permutations.
inline int magic_square_oracle() {
  std::vector<int> v = {1, 2, 3, 4, 5, 6, 7, 8, 9};
  int count = 0;
  do {
    auto line = [&](int a, int b, int c) { return v[a] + v[b] + v[c] == 15; };
    count += line(0, 1, 2) && line(3, 4, 5) && line(6, 7, 8) && line(0, 3, 6) && line(1, 4, 7) && line(2, 5, 8) &&
             line(0, 4, 8) && line(2, 4, 6);
  } while (std::next_permutation(v.begin(), v.end()));
  return count;
}

/// Total cost of the weighted example for one assignment, with the cost
/// tables transcribed by hand; k = 5, costs combine as min(5, a + b).
inline Int wcsp_example_cost(Int v0, Int v1, Int v2, Int v3) {
  const Int k = 5;
  const std::set<std::pair<Int, Int>> r0 = {{0, 0}, {0, 1}, {1, 0}, {1, 1}, {1, 2},
                                            {2, 1}, {2, 2}, {2, 3}, {3, 2}, {3, 3}};
  Int total = 0;
  auto add = [&](Int c) { total = std::min(k, total + std::min(k, c)); };
  add(r0.count({v0, v1}) ? 5 : 0);
  add(v0 == v2 ? 0 : 5);
  add((v1 + v2) * v3 > 5 ? 0 : 2);
  add(v0 == 1 || v0 == 3 ? 1 : 0);
  add(v1 == 1 || v1 == 2 ? 1 : 0);
  add(v2 == 0 || v2 == 2 ? 1 : 0);
  return total;
}

// ---------------------------------------------------------------------------
// Random instances with an independent description of their semantics

struct RandomInstance {
  std::string xml;
  std::vector<std::vector<Int>> domains;  // per variable
  std::vector<std::function<bool(const std::vector<Int>&)>> constraints;

  /// Assignments accepted by every constraint, by plain enumeration.
  std::uint64_t count_by_filter() const {
    std::vector<std::size_t> at(domains.size(), 0);
    std::vector<Int> values(domains.size());
    std::uint64_t count = 0;
    while (true) {
      for (std::size_t i = 0; i < domains.size(); ++i) values[i] = domains[i][at[i]];
      bool ok = true;
      for (const auto& c : constraints)
        if (!c(values)) {
          ok = false;
          break;
        }
      count += ok;
      std::size_t i = domains.size();
      while (i > 0) {
        --i;
        if (++at[i] < domains[i].size()) break;
        at[i] = 0;
        if (i == 0) return count;
      }
      if (domains.empty()) return count;
    }
  }
};

inline RandomInstance random_instance(std::mt19937_64& rng) {
  auto uniform = [&](Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); };
  RandomInstance r;
  const int n = static_cast<int>(uniform(2, 6));
  std::uint64_t space = 1;
  std::ostringstream domains, variables, relations, predicates, constraints;
  for (int i = 0; i < n; ++i) {
    Int size = uniform(1, 5);
    while (space * static_cast<std::uint64_t>(size) > 100000) --size;
    space *= static_cast<std::uint64_t>(size);
    const Int lo = uniform(-2, 3);
    std::vector<Int> values;
    for (Int v = lo; v < lo + size; ++v) values.push_back(v);
    r.domains.push_back(values);
    domains << "<domain name=\"D" << i << "\" nbValues=\"" << size << "\">" << lo << ".." << lo + size - 1
            << "</domain>\n";
    variables << "<variable name=\"V" << i << "\" domain=\"D" << i << "\"/>\n";
  }

  auto pick_scope = [&](int arity) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(static_cast<std::size_t>(arity));
    return all;
  };
  auto scope_text = [](const std::vector<int>& scope) {
    std::string s;
    for (int v : scope) s += (s.empty() ? "V" : " V") + std::to_string(v);
    return s;
  };

  // Predicate templates, each paired with a direct C++ reading.
  struct Template {
    const char* params;
    const char* body;
    int vars;
    std::function<bool(Int, Int, Int)> holds;  // third argument is the constant
  };
  const std::vector<Template> templates = {
      {"int X int Y", "ne(X,Y)", 2, [](Int x, Int y, Int) { return x != y; }},
      {"int X int Y int K", "lt(add(X,Y),K)", 2, [](Int x, Int y, Int k) { return x + y < k; }},
      {"int X int Y int K", "eq(abs(sub(X,Y)),K)", 2, [](Int x, Int y, Int k) { return std::abs(x - y) == k; }},
      {"int X int Y int K", "or(eq(X,Y),gt(mul(X,K),Y))", 2, [](Int x, Int y, Int k) { return x == y || x * k > y; }},
      {"int X int K", "ge(mod(X,2),K)", 1, [](Int x, Int, Int k) { return x % 2 >= k; }},
  };
  for (std::size_t t = 0; t < templates.size(); ++t)
    predicates << "<predicate name=\"P" << t << "\"><parameters>" << templates[t].params
               << "</parameters><expression><functional>" << templates[t].body
               << "</functional></expression></predicate>\n";

  const int m = static_cast<int>(uniform(1, 6));
  int relation_count = 0;
  for (int c = 0; c < m; ++c) {
    const Int kind = uniform(0, 3);
    if (kind == 0) {
      const int arity = static_cast<int>(uniform(1, std::min(n, 3)));
      const auto scope = pick_scope(arity);
      const bool supports = uniform(0, 1) == 1;
      std::set<std::vector<Int>> table;
      std::vector<std::size_t> at(static_cast<std::size_t>(arity), 0);
      while (true) {
        std::vector<Int> t;
        for (int i = 0; i < arity; ++i) t.push_back(r.domains[static_cast<std::size_t>(scope[i])][at[i]]);
        if (uniform(0, 9) < 4) table.insert(t);
        int i = arity - 1;
        while (i >= 0 && ++at[i] == r.domains[static_cast<std::size_t>(scope[i])].size()) at[i--] = 0;
        if (i < 0) break;
      }
      std::string tuples;
      for (const auto& t : table) {
        std::string s;
        for (Int v : t) s += (s.empty() ? "" : " ") + std::to_string(v);
        tuples += (tuples.empty() ? "" : "|") + s;
      }
      relations << "<relation name=\"R" << relation_count << "\" arity=\"" << arity << "\" nbTuples=\"" << table.size()
                << "\" semantics=\"" << (supports ? "supports" : "conflicts") << "\">" << tuples << "</relation>\n";
      constraints << "<constraint name=\"C" << c << "\" arity=\"" << arity << "\" scope=\"" << scope_text(scope)
                  << "\" reference=\"R" << relation_count++ << "\"/>\n";
      r.constraints.push_back([scope, supports, table](const std::vector<Int>& v) {
        std::vector<Int> t;
        for (int i : scope) t.push_back(v[static_cast<std::size_t>(i)]);
        return table.count(t) == (supports ? 1u : 0u);
      });
    } else if (kind == 1) {
      const std::size_t t = static_cast<std::size_t>(uniform(0, static_cast<Int>(templates.size()) - 1));
      const auto& tp = templates[t];
      const int arity = std::min(n, tp.vars);
      if (arity < tp.vars) {
        --c;
        continue;
      }
      const auto scope = pick_scope(arity);
      const Int k = uniform(-1, 4);
      std::string params = "V" + std::to_string(scope[0]);
      if (tp.vars == 2) params += " V" + std::to_string(scope[1]);
      if (std::string(tp.params).find(" K") != std::string::npos) params += " " + std::to_string(k);
      constraints << "<constraint name=\"C" << c << "\" arity=\"" << arity << "\" scope=\"" << scope_text(scope)
                  << "\" reference=\"P" << t << "\"><parameters>" << params << "</parameters></constraint>\n";
      const auto holds = tp.holds;
      const bool two = tp.vars == 2;
      r.constraints.push_back([scope, holds, two, k](const std::vector<Int>& v) {
        const Int x = v[static_cast<std::size_t>(scope[0])];
        return two ? holds(x, v[static_cast<std::size_t>(scope[1])], k) : holds(x, 0, k);
      });
    } else if (kind == 2) {
      const int arity = static_cast<int>(uniform(2, std::min(n, 4)));
      if (n < 2) continue;
      const auto scope = pick_scope(arity);
      std::string list;
      for (int v : scope) list += " V" + std::to_string(v);
      constraints << "<constraint name=\"C" << c << "\" arity=\"" << arity << "\" scope=\"" << scope_text(scope)
                  << "\" reference=\"global:allDifferent\"><parameters>[" << list
                  << " ]</parameters></constraint>\n";
      r.constraints.push_back([scope](const std::vector<Int>& v) {
        std::set<Int> seen;
        for (int i : scope) seen.insert(v[static_cast<std::size_t>(i)]);
        return seen.size() == scope.size();
      });
    } else {
      const int arity = static_cast<int>(uniform(1, std::min(n, 4)));
      const auto scope = pick_scope(arity);
      std::vector<Int> coefs;
      std::string list;
      for (int v : scope) {
        Int a = uniform(-3, 3);
        if (a == 0) a = 1;
        coefs.push_back(a);
        list += " { " + std::to_string(a) + " V" + std::to_string(v) + " }";
      }
      static const char* ops[] = {"eq", "ne", "ge", "gt", "le", "lt"};
      const Int op = uniform(0, 5);
      const Int b = uniform(-4, 6);
      constraints << "<constraint name=\"C" << c << "\" arity=\"" << arity << "\" scope=\"" << scope_text(scope)
                  << "\" reference=\"global:weightedSum\"><parameters>[" << list << " ] <" << ops[op] << "/> " << b
                  << "</parameters></constraint>\n";
      r.constraints.push_back([scope, coefs, op, b](const std::vector<Int>& v) {
        Int s = 0;
        for (std::size_t i = 0; i < scope.size(); ++i) s += coefs[i] * v[static_cast<std::size_t>(scope[i])];
        switch (op) {
          case 0: return s == b;
          case 1: return s != b;
          case 2: return s >= b;
          case 3: return s > b;
          case 4: return s <= b;
          default: return s < b;
        }
      });
    }
  }

  std::ostringstream xml;
  xml << "<instance>\n<presentation name=\"random\" format=\"XCSP 2.1\"/>\n"
      << "<domains nbDomains=\"" << n << "\">\n" << domains.str() << "</domains>\n"
      << "<variables nbVariables=\"" << n << "\">\n" << variables.str() << "</variables>\n"
      << "<relations nbRelations=\"" << relation_count << "\">\n" << relations.str() << "</relations>\n"
      << "<predicates nbPredicates=\"" << templates.size() << "\">\n" << predicates.str() << "</predicates>\n"
      << "<constraints nbConstraints=\"" << r.constraints.size() << "\">\n" << constraints.str()
      << "</constraints>\n</instance>\n";
  r.xml = xml.str();
  return r;
}

}  // namespace support
