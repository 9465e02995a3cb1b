#include "xcsp/globals.hpp"

#include <algorithm>
#include <cctype>
#include <functional>

#include "xcsp/error.hpp"

namespace xcsp {

namespace {

// Collections with a single attribute are written as plain lists, so only
// multi-attribute collections carry a conventional order here.
const std::vector<GlobalInfo>& catalog() {
  static const std::vector<GlobalInfo> entries = {
      {"alldifferent", "allDifferent", true, {}},
      {"weightedsum", "weightedSum", true, {{0, {"coef", "var"}}}},
      {"element", "element", true, {}},
      {"cumulative", "cumulative", true, {{0, {"origin", "duration", "end", "height"}}}},
      {"among", "among", false, {}},
      {"atleast", "atleast", false, {}},
      {"atmost", "atmost", false, {}},
      {"cycle", "cycle", false, {{1, {"index", "succ"}}}},
      {"diffn", "diffn", false, {{0, {"origin", "size", "end"}}}},
      {"disjunctive", "disjunctive", false, {{0, {"origin", "duration"}}}},
      {"global_cardinality", "global_cardinality", false, {{1, {"val", "noccurrence"}}}},
      {"global_cardinality_with_costs",
       "global_cardinality_with_costs",
       false,
       {{1, {"val", "noccurrence"}}, {2, {"i", "j", "c"}}}},
      {"minimum_weight_alldifferent", "minimum_weight_alldifferent", false, {{1, {"i", "j", "c"}}}},
      {"minimum_weight_all_different", "minimum_weight_all_different", false, {{1, {"i", "j", "c"}}}},
      {"not_all_equal", "not_all_equal", false, {}},
      {"nvalue", "nvalue", false, {}},
      {"nvalues", "nvalues", false, {}},
  };
  return entries;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

// Applies `f` to every dictionary reachable through lists from `v`.
void for_each_dict(ParamValue& v, const std::function<void(ParamDict&)>& f) {
  if (v.is_dict()) {
    f(v.as_dict());
  } else if (v.is_list()) {
    for (auto& item : v.as_list().items) for_each_dict(item, f);
  }
}

template <class F>
std::vector<ParamValue> rewrite_ordered(std::string_view name, std::vector<ParamValue> params, F f) {
  const GlobalInfo* info = find_global(name);
  if (!info) return params;
  for (const auto& order : info->orders)
    if (order.param < params.size())
      for_each_dict(params[order.param], [&](ParamDict& d) { f(d, order.keys); });
  return params;
}

}  // namespace

const KeyOrder* GlobalInfo::order_for(std::size_t param) const noexcept {
  for (const auto& o : orders)
    if (o.param == param) return &o;
  return nullptr;
}

const GlobalInfo* find_global(std::string_view name) noexcept {
  const std::string key = lower(name);
  for (const auto& g : catalog())
    if (g.name == key) return &g;
  return nullptr;
}

std::span<const GlobalInfo> global_catalog() noexcept { return catalog(); }

std::vector<ParamValue> bind_conventional_order(std::string_view name, std::vector<ParamValue> params) {
  return rewrite_ordered(name, std::move(params), [&](ParamDict& d, const std::vector<std::string_view>& keys) {
    if (d.entries.empty() || d.keyed()) return;
    if (d.entries.size() != keys.size())
      throw Error("DictArityMismatch", "conventional order of global:" + std::string(name) + " expects " +
                                           std::to_string(keys.size()) + " values, got " +
                                           std::to_string(d.entries.size()));
    for (std::size_t i = 0; i < keys.size(); ++i) d.entries[i].key = keys[i];
    d.positional = true;
  });
}

std::vector<ParamValue> to_conventional_order(std::string_view name, std::vector<ParamValue> params) {
  return rewrite_ordered(name, std::move(params), [](ParamDict& d, const std::vector<std::string_view>& keys) {
    if (d.entries.empty() || !d.keyed()) return;
    for (const auto& e : d.entries)
      if (std::find(keys.begin(), keys.end(), e.key) == keys.end()) return;
    std::vector<DictEntry> ordered;
    for (auto key : keys) {
      const ParamValue* v = d.find(key);
      ordered.push_back({std::string(key), v ? *v : ParamValue()});
    }
    d.entries = std::move(ordered);
    d.positional = true;
  });
}

std::vector<ParamValue> to_keyed_form(std::vector<ParamValue> params) {
  for (auto& p : params)
    for_each_dict(p, [](ParamDict& d) {
      if (!d.keyed()) return;
      std::erase_if(d.entries, [](const DictEntry& e) { return e.value.is_nil(); });
      d.positional = false;
    });
  return params;
}

bool is_deprecated_weighted_sum(std::span<const ParamValue> params) noexcept {
  if (params.empty() || !params[0].is_list()) return false;
  const auto& items = params[0].as_list().items;
  return !items.empty() && std::all_of(items.begin(), items.end(), [](const ParamValue& v) { return v.is_list(); });
}

namespace {

bool int_or_var(const ParamValue& v) { return v.is_int() || v.is_var(); }

std::optional<std::string> check_dict(const ParamValue& v, std::span<const std::string_view> keys,
                                      std::span<const std::string_view> required, bool allow_nil) {
  if (!v.is_dict()) return "expected a dictionary, got " + to_string(v);
  const auto& d = v.as_dict();
  if (!d.keyed()) return "dictionary " + to_string(v) + " is not bound to keys";
  for (const auto& e : d.entries) {
    if (std::find(keys.begin(), keys.end(), e.key) == keys.end()) return "unexpected key /" + e.key;
    if (e.value.is_nil() ? !allow_nil : !int_or_var(e.value))
      return "key /" + e.key + " needs an integer or a variable";
  }
  for (auto key : required) {
    const ParamValue* p = d.find(key);
    if (!p || p->is_nil()) return "missing key /" + std::string(key);
  }
  return std::nullopt;
}

}  // namespace

std::optional<std::string> check_signature(std::string_view name, std::span<const ParamValue> params) {
  const std::string key = lower(name);
  auto count = [&](std::size_t n) -> std::optional<std::string> {
    if (params.size() != n)
      return "expected " + std::to_string(n) + " parameters, got " + std::to_string(params.size());
    return std::nullopt;
  };
  auto list_of_values = [](const ParamValue& v, const char* what) -> std::optional<std::string> {
    if (!v.is_list()) return std::string(what) + " must be a list";
    for (const auto& item : v.as_list().items)
      if (!int_or_var(item)) return std::string(what) + " holds " + to_string(item);
    return std::nullopt;
  };

  if (key == "alldifferent") {
    if (auto e = count(1)) return e;
    return list_of_values(params[0], "variable list");
  }
  if (key == "weightedsum") {
    if (auto e = count(3)) return e;
    if (!params[0].is_list()) return "first parameter must be a list of {coef var} dictionaries";
    static constexpr std::string_view keys[] = {"coef", "var"};
    for (const auto& item : params[0].as_list().items) {
      if (auto e = check_dict(item, keys, keys, false)) return e;
      if (!item.as_dict().find("coef")->is_int()) return "coefficient must be an integer";
    }
    if (!params[1].is_atom()) return "second parameter must be a relational operator";
    if (!params[2].is_int()) return "third parameter must be an integer";
    return std::nullopt;
  }
  if (key == "element") {
    if (auto e = count(3)) return e;
    if (!int_or_var(params[0])) return "index must be an integer or a variable";
    if (auto e = list_of_values(params[1], "table")) return e;
    if (!int_or_var(params[2])) return "value must be an integer or a variable";
    return std::nullopt;
  }
  if (key == "cumulative") {
    if (auto e = count(2)) return e;
    if (!params[0].is_list()) return "first parameter must be a list of tasks";
    static constexpr std::string_view keys[] = {"origin", "duration", "end", "height"};
    static constexpr std::string_view required[] = {"height"};
    for (const auto& item : params[0].as_list().items) {
      if (auto e = check_dict(item, keys, required, true)) return e;
      const auto& d = item.as_dict();
      int missing = 0;
      for (auto k : {"origin", "duration", "end"}) {
        const ParamValue* p = d.find(k);
        missing += !p || p->is_nil();
      }
      if (missing > 1) return "task " + to_string(item) + " leaves more than one of origin/duration/end unset";
    }
    if (!int_or_var(params[1])) return "limit must be an integer or a variable";
    return std::nullopt;
  }
  return std::nullopt;
}

std::vector<std::string> referenced_variables(std::span<const ParamValue> params) {
  std::vector<std::string> out;
  std::function<void(const ParamValue&)> walk = [&](const ParamValue& v) {
    if (v.is_var()) {
      if (std::find(out.begin(), out.end(), v.as_var().name) == out.end()) out.push_back(v.as_var().name);
    } else if (v.is_list()) {
      for (const auto& item : v.as_list().items) walk(item);
    } else if (v.is_dict()) {
      for (const auto& e : v.as_dict().entries) walk(e.value);
    }
  };
  for (const auto& p : params) walk(p);
  return out;
}

}  // namespace xcsp
