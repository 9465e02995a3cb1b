#include "xcsp/lexparse.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "xcsp/error.hpp"

namespace xcsp {

namespace {

bool is_space(char c) noexcept { return c == ' ' || c == '\t' || c == '\n' || c == '\r'; }
bool is_digit(char c) noexcept { return c >= '0' && c <= '9'; }
bool is_ident_start(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}
bool is_ident_char(char c) noexcept { return is_ident_start(c) || is_digit(c); }

[[noreturn]] void fail(const char* code, const std::string& message, std::size_t offset) {
  throw Error(code, message + " (offset " + std::to_string(offset) + ")", offset);
}

class Lexer {
public:
  Lexer(std::string_view text, std::size_t base) : text_(text), base_(base) {}

  void run(std::vector<Token>& out) {
    while (true) {
      while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
      if (pos_ >= text_.size()) return;
      const char c = text_[pos_];
      if (starts_integer(pos_)) {
        out.push_back(integer());
        if (text_.substr(pos_, 2) == "..") {
          out.push_back(simple(TokenKind::dotdot, 2));
          if (!starts_integer(pos_)) fail("LexError", "dangling interval operator '..'", where(pos_ - 2));
        } else if (pos_ < text_.size() && (is_ident_char(text_[pos_]) || text_[pos_] == '.')) {
          fail("LexError", "malformed integer", where(pos_));
        }
        continue;
      }
      if (is_ident_start(c)) {
        std::size_t end = pos_;
        while (end < text_.size() && is_ident_char(text_[end])) ++end;
        Token t{TokenKind::identifier, std::string(text_.substr(pos_, end - pos_)), where(pos_)};
        pos_ = end;
        out.push_back(std::move(t));
        continue;
      }
      switch (c) {
        case '[': out.push_back(simple(TokenKind::lbracket, 1)); continue;
        case ']': out.push_back(simple(TokenKind::rbracket, 1)); continue;
        case '{': out.push_back(simple(TokenKind::lbrace, 1)); continue;
        case '}': out.push_back(simple(TokenKind::rbrace, 1)); continue;
        case '|': out.push_back(simple(TokenKind::pipe, 1)); continue;
        case ':': out.push_back(simple(TokenKind::colon, 1)); continue;
        case '/': {
          const std::size_t start = pos_;
          std::size_t end = pos_ + 1;
          if (end >= text_.size() || !is_ident_start(text_[end]))
            fail("LexError", "'/' must be immediately followed by a key", where(start));
          while (end < text_.size() && is_ident_char(text_[end])) ++end;
          Token t{TokenKind::slash_key, std::string(text_.substr(start + 1, end - start - 1)), where(start)};
          pos_ = end;
          out.push_back(std::move(t));
          continue;
        }
        default:
          fail("LexError", std::string("unexpected character '") + c + "'", where(pos_));
      }
    }
  }

private:
  std::size_t where(std::size_t p) const noexcept { return base_ + p; }

  bool starts_integer(std::size_t p) const noexcept {
    if (p >= text_.size()) return false;
    if (is_digit(text_[p])) return true;
    return (text_[p] == '-' || text_[p] == '+') && p + 1 < text_.size() && is_digit(text_[p + 1]);
  }

  Token integer() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    if (text_[end] == '+' || text_[end] == '-') ++end;
    while (end < text_.size() && is_digit(text_[end])) ++end;
    std::string_view lexeme = text_.substr(start, end - start);
    std::string_view digits = lexeme.front() == '+' ? lexeme.substr(1) : lexeme;
    Int v = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (ec != std::errc() || ptr != digits.data() + digits.size())
      fail("LexError", "integer out of range: " + std::string(lexeme), where(start));
    pos_ = end;
    Token t{TokenKind::integer, std::string(lexeme), where(start)};
    t.integer = v;
    return t;
  }

  Token simple(TokenKind kind, std::size_t length) {
    Token t{kind, std::string(text_.substr(pos_, length)), where(pos_)};
    pos_ += length;
    return t;
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

// Cursor over a token span with end-of-input reporting at the last token.
class Cursor {
public:
  explicit Cursor(std::span<const Token> tokens) : tokens_(tokens) {}

  bool done() const noexcept { return i_ >= tokens_.size(); }
  const Token& peek() const { return tokens_[i_]; }
  const Token* peek_if(std::size_t ahead = 0) const noexcept {
    return i_ + ahead < tokens_.size() ? &tokens_[i_ + ahead] : nullptr;
  }
  const Token& next() { return tokens_[i_++]; }
  std::size_t end_offset() const noexcept { return tokens_.empty() ? 0 : tokens_.back().offset; }

private:
  std::span<const Token> tokens_;
  std::size_t i_ = 0;
};

// Splits a token stream at pipes. Each group is a span into `tokens`.
std::vector<std::span<const Token>> split_groups(std::span<const Token> tokens) {
  std::vector<std::span<const Token>> groups;
  if (tokens.empty()) return groups;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= tokens.size(); ++i) {
    if (i == tokens.size() || tokens[i].kind == TokenKind::pipe) {
      groups.push_back(tokens.subspan(start, i - start));
      start = i + 1;
    }
  }
  return groups;
}

std::size_t group_offset(std::span<const Token> all, std::span<const Token> group) {
  if (!group.empty()) return group.front().offset;
  // Empty group: report at the neighbouring pipe.
  const Token* before = group.data() - 1;
  if (before >= all.data()) return before->offset;
  return all.empty() ? 0 : all.front().offset;
}

Tuple read_tuple(std::span<const Token> all, std::span<const Token> group, int arity, std::size_t index) {
  Tuple t;
  t.reserve(static_cast<std::size_t>(arity));
  for (const auto& tok : group) {
    if (tok.kind != TokenKind::integer)
      fail("LexError", "unexpected '" + tok.lexeme + "' in tuple " + std::to_string(index), tok.offset);
    t.push_back(tok.integer);
  }
  if (static_cast<int>(t.size()) != arity)
    fail("ArityMismatch",
         "tuple " + std::to_string(index) + " has " + std::to_string(t.size()) + " value(s), expected " +
             std::to_string(arity),
         group_offset(all, group));
  return t;
}

// String overloads: lex, run `f`, and keep reported offsets inside `text`.
template <class F>
auto with_text(std::string_view text, F&& f) -> decltype(f(std::declval<std::span<const Token>>())) {
  try {
    auto tokens = lex_text(text);
    return f(std::span<const Token>(tokens));
  } catch (const Error& e) {
    if (!e.has_offset()) throw;
    const std::size_t at = text.empty() ? 0 : std::min(e.offset(), text.size() - 1);
    if (at == e.offset()) throw;
    throw Error(e.code(), e.what(), at);
  }
}

class ParamParser {
public:
  explicit ParamParser(std::span<const Token> tokens) : cur_(tokens) {}

  std::vector<ParamValue> parse_all() {
    std::vector<ParamValue> out;
    while (!cur_.done()) out.push_back(value());
    return out;
  }

private:
  ParamValue value() {
    const Token& t = cur_.next();
    switch (t.kind) {
      case TokenKind::integer: return ParamValue(t.integer);
      case TokenKind::identifier: return ParamValue(VarRef{t.lexeme});
      case TokenKind::atom: return ParamValue(t.atom);
      case TokenKind::nil: return ParamValue(Nil{});
      case TokenKind::infinity: return ParamValue(Infinity{});
      case TokenKind::lbracket: return list(t);
      case TokenKind::lbrace: return dict(t);
      case TokenKind::rbracket: fail("UnbalancedBracket", "unmatched ']'", t.offset);
      case TokenKind::rbrace: fail("UnbalancedBrace", "unmatched '}'", t.offset);
      case TokenKind::slash_key: fail("LexError", "key '/" + t.lexeme + "' outside a dictionary", t.offset);
      default: fail("LexError", "unexpected '" + t.lexeme + "' in parameters", t.offset);
    }
  }

  ParamValue list(const Token& open) {
    ParamList l;
    while (true) {
      const Token* t = cur_.peek_if();
      if (!t) fail("UnbalancedBracket", "'[' is never closed", open.offset);
      if (t->kind == TokenKind::rbracket) {
        cur_.next();
        return ParamValue(std::move(l));
      }
      if (t->kind == TokenKind::rbrace) fail("UnbalancedBracket", "'}' closes a '['", t->offset);
      l.items.push_back(value());
    }
  }

  ParamValue dict(const Token& open) {
    ParamDict d;
    bool keyed = false;
    bool positional = false;
    std::set<std::string, std::less<>> keys;
    while (true) {
      const Token* t = cur_.peek_if();
      if (!t) fail("UnbalancedBrace", "'{' is never closed", open.offset);
      if (t->kind == TokenKind::rbrace) {
        cur_.next();
        d.positional = positional;
        return ParamValue(std::move(d));
      }
      if (t->kind == TokenKind::rbracket) fail("UnbalancedBrace", "']' closes a '{'", t->offset);
      if (t->kind == TokenKind::slash_key) {
        if (positional) fail("MixedDictStyle", "keyed entry after positional values", t->offset);
        keyed = true;
        const Token& key = cur_.next();
        const Token* v = cur_.peek_if();
        if (!v || v->kind == TokenKind::slash_key || v->kind == TokenKind::rbrace)
          fail("DanglingKey", "key '/" + key.lexeme + "' has no value", key.offset);
        if (!keys.insert(key.lexeme).second)
          fail("DuplicateKey", "key '/" + key.lexeme + "' appears twice", key.offset);
        d.entries.push_back(DictEntry{key.lexeme, value()});
      } else {
        if (keyed) fail("MixedDictStyle", "positional value after keyed entries", t->offset);
        positional = true;
        d.entries.push_back(DictEntry{std::string(), value()});
      }
    }
  }

  Cursor cur_;
};

}  // namespace

std::string_view to_string(TokenKind kind) noexcept {
  switch (kind) {
    case TokenKind::integer: return "integer";
    case TokenKind::identifier: return "identifier";
    case TokenKind::lbracket: return "[";
    case TokenKind::rbracket: return "]";
    case TokenKind::lbrace: return "{";
    case TokenKind::rbrace: return "}";
    case TokenKind::slash_key: return "/key";
    case TokenKind::pipe: return "|";
    case TokenKind::colon: return ":";
    case TokenKind::dotdot: return "..";
    case TokenKind::atom: return "atom";
    case TokenKind::nil: return "<nil/>";
    case TokenKind::infinity: return "<infinity/>";
    case TokenKind::true_: return "<true/>";
    case TokenKind::false_: return "<false/>";
  }
  return "?";
}

std::vector<Token> lex_text(std::string_view text, std::size_t base) {
  std::vector<Token> out;
  Lexer(text, base).run(out);
  return out;
}

std::vector<Token> lex_body(std::span<const BodyPiece> pieces) {
  std::vector<Token> out;
  for (const auto& piece : pieces) {
    if (const auto* text = std::get_if<TextPiece>(&piece)) {
      Lexer(text->text, text->offset).run(out);
      continue;
    }
    const auto& el = std::get<ElementPiece>(piece);
    Token t{TokenKind::atom, el.name, el.offset};
    if (auto op = relop_from_name(el.name)) {
      t.atom = *op;
    } else if (el.name == "nil") {
      t.kind = TokenKind::nil;
    } else if (el.name == "infinity") {
      t.kind = TokenKind::infinity;
    } else if (el.name == "true") {
      t.kind = TokenKind::true_;
    } else if (el.name == "false") {
      t.kind = TokenKind::false_;
    } else {
      fail("LexError", "unexpected element <" + el.name + "> in body", el.offset);
    }
    out.push_back(std::move(t));
  }
  return out;
}

DomainValues parse_domain_values(std::span<const Token> tokens) {
  DomainValues out;
  if (tokens.empty()) fail("EmptyDomain", "domain has no values", 0);
  Cursor cur(tokens);
  std::size_t total = 0;
  while (!cur.done()) {
    const Token& lo = cur.next();
    if (lo.kind != TokenKind::integer) fail("LexError", "expected an integer in domain, got '" + lo.lexeme + "'", lo.offset);
    const Token* op = cur.peek_if();
    if (op && op->kind == TokenKind::dotdot) {
      cur.next();
      const Token* hi = cur.peek_if();
      if (!hi || hi->kind != TokenKind::integer) fail("LexError", "dangling interval operator '..'", op->offset);
      cur.next();
      if (lo.integer > hi->integer)
        fail("InvertedInterval", "interval " + lo.lexeme + ".." + hi->lexeme + " has min > max", lo.offset);
      const auto width = static_cast<unsigned __int128>(static_cast<__int128>(hi->integer) - lo.integer + 1);
      if (width > max_domain_size || total + static_cast<std::size_t>(width) > max_domain_size)
        fail("DomainTooLarge", "domain expands to more than " + std::to_string(max_domain_size) + " values", lo.offset);
      total += static_cast<std::size_t>(width);
      out.pieces.push_back(DomainPiece{lo.integer, hi->integer, true});
    } else {
      if (++total > max_domain_size)
        fail("DomainTooLarge", "domain expands to more than " + std::to_string(max_domain_size) + " values", lo.offset);
      out.pieces.push_back(DomainPiece{lo.integer, lo.integer, false});
    }
  }
  out.values.reserve(total);
  for (const auto& p : out.pieces)
    for (Int v = p.min;; ++v) {
      out.values.push_back(v);
      if (v == p.max) break;
    }
  std::sort(out.values.begin(), out.values.end());
  out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
  return out;
}

DomainValues parse_domain_values(std::string_view text) {
  return with_text(text, [](std::span<const Token> t) { return parse_domain_values(t); });
}

std::vector<Tuple> parse_tuples(std::span<const Token> tokens, int arity) {
  if (arity < 1) throw Error("InvalidArity", "arity must be at least 1");
  std::vector<Tuple> out;
  auto groups = split_groups(tokens);
  out.reserve(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) out.push_back(read_tuple(tokens, groups[i], arity, i));
  return out;
}

std::vector<Tuple> parse_tuples(std::string_view text, int arity) {
  return with_text(text, [arity](std::span<const Token> t) { return parse_tuples(t, arity); });
}

std::vector<WeightedTuple> parse_weighted_tuples(std::span<const Token> tokens, int arity) {
  if (arity < 1) throw Error("InvalidArity", "arity must be at least 1");
  std::vector<WeightedTuple> out;
  auto groups = split_groups(tokens);
  out.reserve(groups.size());
  std::optional<Cost> current;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    auto group = groups[i];
    if (group.size() >= 2 && group[1].kind == TokenKind::colon) {
      const Token& c = group[0];
      if (c.kind == TokenKind::infinity) {
        current = Cost::infinity();
      } else if (c.kind == TokenKind::integer) {
        if (c.integer < 0) fail("NegativeCost", "cost " + c.lexeme + " is negative", c.offset);
        current = Cost(c.integer);
      } else {
        fail("LexError", "invalid cost '" + c.lexeme + "'", c.offset);
      }
      group = group.subspan(2);
    } else if (!group.empty() && group[0].kind == TokenKind::colon) {
      fail("LexError", "':' without a cost", group[0].offset);
    }
    if (!current)
      fail("MissingFirstCost", "the first tuple must carry an explicit cost", group_offset(tokens, groups[i]));
    out.push_back(WeightedTuple{*current, read_tuple(tokens, group, arity, i)});
  }
  return out;
}

std::vector<WeightedTuple> parse_weighted_tuples(std::string_view text, int arity) {
  return with_text(text, [arity](std::span<const Token> t) { return parse_weighted_tuples(t, arity); });
}

namespace {

void append_tuple(std::string& out, const Tuple& t) {
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (j) out += ' ';
    out += std::to_string(t[j]);
  }
}

void append_separator(std::string& out, std::size_t i, std::size_t per_line) {
  if (i == 0) return;
  out += '|';
  if (per_line > 0 && i % per_line == 0) out += '\n';
}

}  // namespace

std::string format_tuples(std::span<const Tuple> tuples, std::size_t per_line) {
  std::string out;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    append_separator(out, i, per_line);
    append_tuple(out, tuples[i]);
  }
  return out;
}

std::string format_weighted_tuples(std::span<const WeightedTuple> tuples, std::size_t per_line) {
  std::string out;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    append_separator(out, i, per_line);
    if (i == 0 || tuples[i].cost != tuples[i - 1].cost) {
      out += tuples[i].cost.is_infinite() ? std::string("<infinity/>") : tuples[i].cost.to_string();
      out += ':';
    }
    append_tuple(out, tuples[i].tuple);
  }
  return out;
}

std::vector<FormalParam> parse_formal_parameters(std::span<const Token> tokens) {
  std::vector<FormalParam> out;
  std::set<std::string, std::less<>> seen;
  Cursor cur(tokens);
  while (!cur.done()) {
    const Token& type = cur.next();
    if (type.kind != TokenKind::identifier)
      fail("LexError", "expected a parameter type, got '" + type.lexeme + "'", type.offset);
    if (type.lexeme != "int") fail("UnknownType", "unsupported parameter type '" + type.lexeme + "'", type.offset);
    const Token* name = cur.peek_if();
    if (!name) fail("LexError", "parameter type without a name", type.offset);
    if (name->kind != TokenKind::identifier)
      fail("LexError", "expected a parameter name, got '" + name->lexeme + "'", name->offset);
    cur.next();
    if (is_reserved_identifier(name->lexeme))
      fail("ReservedIdentifier", "'" + name->lexeme + "' is an operator name and cannot name a parameter", name->offset);
    if (!seen.insert(name->lexeme).second)
      fail("DuplicateParameter", "parameter '" + name->lexeme + "' declared twice", name->offset);
    out.push_back(FormalParam{type.lexeme, name->lexeme});
  }
  return out;
}

std::vector<FormalParam> parse_formal_parameters(std::string_view text) {
  return with_text(text, [](std::span<const Token> t) { return parse_formal_parameters(t); });
}

std::vector<EffectiveParam> parse_effective_parameters(std::span<const Token> tokens) {
  std::vector<EffectiveParam> out;
  for (const auto& t : tokens) {
    if (t.kind == TokenKind::integer)
      out.emplace_back(t.integer);
    else if (t.kind == TokenKind::identifier)
      out.emplace_back(VarRef{t.lexeme});
    else
      fail("LexError", "effective parameters must be integers or variables, got '" + t.lexeme + "'", t.offset);
  }
  return out;
}

std::vector<EffectiveParam> parse_effective_parameters(std::string_view text) {
  return with_text(text, [](std::span<const Token> t) { return parse_effective_parameters(t); });
}

std::vector<ParamValue> parse_param_values(std::span<const Token> tokens) {
  return ParamParser(tokens).parse_all();
}

std::vector<ParamValue> parse_param_values(std::string_view text) {
  return with_text(text, [](std::span<const Token> t) { return parse_param_values(t); });
}

}  // namespace xcsp
