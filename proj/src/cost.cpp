#include "xcsp/cost.hpp"

#include <algorithm>
#include <charconv>

#include "xcsp/error.hpp"

namespace xcsp {

const char* to_string(Severity s) noexcept {
  return s == Severity::error ? "error" : "warning";
}

bool has_errors(const std::vector<Diagnostic>& diagnostics) noexcept {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::error; });
}

Cost::Cost(Int value) : value_(value) {
  if (value < 0) throw Error("NegativeCost", "cost must be nonnegative, got " + std::to_string(value));
}

Int Cost::value() const {
  if (infinite_) throw Error("InfiniteCost", "cost is infinity");
  return value_;
}

std::string Cost::to_string() const {
  return infinite_ ? std::string("infinity") : std::to_string(value_);
}

Cost Cost::parse(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\n' || text.front() == '\r'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\n' || text.back() == '\r'))
    text.remove_suffix(1);
  if (text == "infinity") return infinity();
  std::string_view digits = text;
  if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
  Int v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size())
    throw Error("InvalidCost", "not a cost: '" + std::string(text) + "'");
  return Cost(v);
}

Cost saturating_add(Cost a, Cost b) noexcept {
  if (a.is_infinite() || b.is_infinite()) return Cost::infinity();
  Int sum = 0;
  if (__builtin_add_overflow(a.value(), b.value(), &sum)) return Cost::infinity();
  return Cost(sum);
}

Valuation::Valuation(Cost top) : top_(top) {
  if (top == Cost(0)) throw Error("InvalidMaximalCost", "maximal cost must be at least 1");
}

Cost Valuation::combine(Cost a, Cost b) const noexcept {
  return std::min(top_, saturating_add(a, b));
}

Cost Valuation::clamp(Cost c) const noexcept {
  return std::min(top_, c);
}

}  // namespace xcsp
