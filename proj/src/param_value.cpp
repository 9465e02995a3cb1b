#include "xcsp/param_value.hpp"

#include <algorithm>
#include <array>

namespace xcsp {

namespace {

constexpr std::array<std::string_view, 6> kRelOpNames{"eq", "ne", "ge", "gt", "le", "lt"};

// Keyed entries whose value is not nil, sorted by key.
std::vector<const DictEntry*> effective_entries(const ParamDict& d) {
  std::vector<const DictEntry*> out;
  for (const auto& e : d.entries)
    if (!e.value.is_nil()) out.push_back(&e);
  std::sort(out.begin(), out.end(), [](auto* a, auto* b) { return a->key < b->key; });
  return out;
}

}  // namespace

std::string_view to_string(RelOp op) noexcept {
  return kRelOpNames[static_cast<std::size_t>(op)];
}

std::optional<RelOp> relop_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kRelOpNames.size(); ++i)
    if (kRelOpNames[i] == name) return static_cast<RelOp>(i);
  return std::nullopt;
}

bool compare(Int lhs, RelOp op, Int rhs) noexcept {
  switch (op) {
    case RelOp::eq: return lhs == rhs;
    case RelOp::ne: return lhs != rhs;
    case RelOp::ge: return lhs >= rhs;
    case RelOp::gt: return lhs > rhs;
    case RelOp::le: return lhs <= rhs;
    case RelOp::lt: return lhs < rhs;
  }
  return false;
}

bool ParamDict::keyed() const noexcept {
  return std::all_of(entries.begin(), entries.end(), [](const DictEntry& e) { return !e.key.empty(); });
}

const ParamValue* ParamDict::find(std::string_view key) const noexcept {
  for (const auto& e : entries)
    if (e.key == key) return &e.value;
  return nullptr;
}

bool operator==(const ParamValue& a, const ParamValue& b) { return a.value == b.value; }
bool operator==(const ParamList& a, const ParamList& b) { return a.items == b.items; }
bool operator==(const ParamDict& a, const ParamDict& b) {
  return a.positional == b.positional && a.entries == b.entries;
}
bool operator==(const DictEntry& a, const DictEntry& b) { return a.key == b.key && a.value == b.value; }

bool equivalent(const ParamValue& a, const ParamValue& b) {
  if (a.value.index() != b.value.index()) return false;
  if (a.is_list()) return equivalent(a.as_list().items, b.as_list().items);
  if (!a.is_dict()) return a == b;

  const auto& da = a.as_dict();
  const auto& db = b.as_dict();
  if (!da.keyed() || !db.keyed()) {
    // Unbound positional dictionaries compare value by value.
    if (da.keyed() != db.keyed() || da.entries.size() != db.entries.size()) return false;
    for (std::size_t i = 0; i < da.entries.size(); ++i)
      if (!equivalent(da.entries[i].value, db.entries[i].value)) return false;
    return true;
  }
  auto ea = effective_entries(da);
  auto eb = effective_entries(db);
  if (ea.size() != eb.size()) return false;
  for (std::size_t i = 0; i < ea.size(); ++i)
    if (ea[i]->key != eb[i]->key || !equivalent(ea[i]->value, eb[i]->value)) return false;
  return true;
}

bool equivalent(const std::vector<ParamValue>& a, const std::vector<ParamValue>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!equivalent(a[i], b[i])) return false;
  return true;
}

std::string to_string(const ParamValue& v) {
  struct Printer {
    std::string operator()(Int i) const { return std::to_string(i); }
    std::string operator()(const VarRef& r) const { return r.name; }
    std::string operator()(RelOp op) const { return "<" + std::string(to_string(op)) + "/>"; }
    std::string operator()(Nil) const { return "<nil/>"; }
    std::string operator()(Infinity) const { return "<infinity/>"; }
    std::string operator()(const ParamList& l) const {
      std::string s = "[";
      for (std::size_t i = 0; i < l.items.size(); ++i) s += (i ? " " : "") + to_string(l.items[i]);
      return s + "]";
    }
    std::string operator()(const ParamDict& d) const {
      std::string s = "{";
      for (std::size_t i = 0; i < d.entries.size(); ++i) {
        if (i) s += " ";
        if (!d.entries[i].key.empty()) s += "/" + d.entries[i].key + " ";
        s += to_string(d.entries[i].value);
      }
      return s + "}";
    }
  };
  return std::visit(Printer{}, v.value);
}

}  // namespace xcsp
