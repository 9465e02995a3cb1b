#pragma once

// Micro-parsers for abridged body fragments. Bodies mix character data with
// a handful of embedded empty elements (<gt/>, <nil/>, <infinity/>, ...), so
// everything works on a token stream produced from the mixed content; the
// string overloads are conveniences over lex_text.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "xcsp/cost.hpp"
#include "xcsp/expr.hpp"
#include "xcsp/param_value.hpp"

namespace xcsp {

enum class TokenKind {
  integer,
  identifier,
  lbracket,
  rbracket,
  lbrace,
  rbrace,
  slash_key,
  pipe,
  colon,
  dotdot,
  atom,
  nil,
  infinity,
  true_,
  false_,
};

std::string_view to_string(TokenKind kind) noexcept;

struct Token {
  TokenKind kind;
  std::string lexeme;  // identifier text, key (without '/'), integer text, element name
  std::size_t offset = 0;
  Int integer = 0;
  RelOp atom = RelOp::eq;
};

struct TextPiece {
  std::string text;
  std::size_t offset = 0;  // position of text[0] in the document
};

struct ElementPiece {
  std::string name;
  std::size_t offset = 0;
};

using BodyPiece = std::variant<TextPiece, ElementPiece>;

/// Tokenizes one run of character data. `base` is added to every offset.
std::vector<Token> lex_text(std::string_view text, std::size_t base = 0);

/// Tokenizes mixed content; each embedded element becomes one token.
std::vector<Token> lex_body(std::span<const BodyPiece> pieces);

// ---------------------------------------------------------------------------
// Domains

struct DomainPiece {
  Int min = 0;
  Int max = 0;
  bool interval = false;
  friend bool operator==(const DomainPiece&, const DomainPiece&) = default;
};

struct DomainValues {
  std::vector<DomainPiece> pieces;  // as written
  std::vector<Int> values;          // sorted, deduplicated expansion
};

/// Upper bound on the number of expanded domain values.
inline constexpr std::size_t max_domain_size = 10'000'000;

DomainValues parse_domain_values(std::span<const Token> tokens);
DomainValues parse_domain_values(std::string_view text);

// ---------------------------------------------------------------------------
// Tuples

using Tuple = std::vector<Int>;

std::vector<Tuple> parse_tuples(std::span<const Token> tokens, int arity);
std::vector<Tuple> parse_tuples(std::string_view text, int arity);

struct WeightedTuple {
  Cost cost;
  Tuple tuple;
  friend bool operator==(const WeightedTuple&, const WeightedTuple&) = default;
};

std::vector<WeightedTuple> parse_weighted_tuples(std::span<const Token> tokens, int arity);
std::vector<WeightedTuple> parse_weighted_tuples(std::string_view text, int arity);

/// Abridged rendering: "0 1|0 3|1 2". A line break is inserted every
/// `per_line` tuples when per_line > 0.
std::string format_tuples(std::span<const Tuple> tuples, std::size_t per_line = 0);
/// Abridged rendering with cost prefixes written only where the cost changes.
std::string format_weighted_tuples(std::span<const WeightedTuple> tuples, std::size_t per_line = 0);

// ---------------------------------------------------------------------------
// Parameters

std::vector<FormalParam> parse_formal_parameters(std::span<const Token> tokens);
std::vector<FormalParam> parse_formal_parameters(std::string_view text);

using EffectiveParam = std::variant<Int, VarRef>;

std::vector<EffectiveParam> parse_effective_parameters(std::span<const Token> tokens);
std::vector<EffectiveParam> parse_effective_parameters(std::string_view text);

/// Structured global-constraint parameters. Dictionaries written without
/// keys come back `positional` with empty keys; the conventional order is
/// applied later by the global-constraint catalog.
std::vector<ParamValue> parse_param_values(std::span<const Token> tokens);
std::vector<ParamValue> parse_param_values(std::string_view text);

}  // namespace xcsp
