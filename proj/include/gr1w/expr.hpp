#pragma once

#include <cctype>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "gr1w/errors.hpp"

namespace gr1w {

/// One valuation of the variable set; bit i holds the value of variable i.
struct Symbol {
  std::uint32_t bits = 0;
  constexpr bool get(int var) const { return (bits >> var) & 1u; }
  friend constexpr bool operator==(Symbol, Symbol) = default;
  friend constexpr auto operator<=>(Symbol, Symbol) = default;
};

namespace detail {
inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

// Words that can never be variable names because the expression grammar
// claims them.
inline bool is_reserved(std::string_view s) {
  return s == "true" || s == "false" || s == "next";
}
}  // namespace detail

/// An ordered set of declared Boolean variables. Declaration order fixes the
/// bit layout of Symbol: the first declared variable is bit 0.
class VarTable {
 public:
  static constexpr int default_max_vars = 16;
  // Symbols are 32-bit and the automaton is explicit-state, so the table
  // refuses anything past this regardless of the configured cap.
  static constexpr int hard_max_vars = 24;

  VarTable() = default;

  explicit VarTable(std::vector<std::string> names, int max_vars = default_max_vars) {
    if (static_cast<int>(names.size()) > max_vars ||
        static_cast<int>(names.size()) > hard_max_vars)
      throw cap_exceeded("variable cap exceeded: " + std::to_string(names.size()) +
                         " variables declared, cap is " +
                         std::to_string(std::min(max_vars, hard_max_vars)));
    for (const auto& n : names) {
      if (!detail::is_identifier(n))
        throw parse_error("invalid variable name '" + n + "'");
      if (detail::is_reserved(n))
        throw parse_error("'" + n + "' is a reserved word and cannot name a variable");
      if (index_.count(n))
        throw parse_error("duplicate variable '" + n + "'");
      index_.emplace(n, static_cast<int>(index_.size()));
    }
    names_ = std::move(names);
  }

  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name(int i) const { return names_.at(static_cast<std::size_t>(i)); }

  /// Index of `name`, or -1 when not declared.
  int index_of(std::string_view name) const {
    auto it = index_.find(std::string(name));
    return it == index_.end() ? -1 : it->second;
  }

  /// Alphabet size r = 2^|V|.
  std::uint32_t alphabet_size() const { return std::uint32_t{1} << size(); }

  friend bool operator==(const VarTable& a, const VarTable& b) { return a.names_ == b.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, int> index_;
};

/// Renders a symbol as the set of variables it assigns true, e.g. "{a,c}".
inline std::string to_string(Symbol s, const VarTable& vars) {
  std::string out = "{";
  for (int i = 0; i < vars.size(); ++i) {
    if (!s.get(i)) continue;
    if (out.size() > 1) out += ',';
    out += vars.name(i);
  }
  return out + "}";
}

/// Immutable Boolean expression over current-step variables and (optionally)
/// next-step variables. Next-step atoms are leaves: nesting of `next` is not
/// representable.
class BoolExpr {
 public:
  enum class Kind : std::uint8_t {
    constant,
    variable,
    next_variable,
    negation,
    conjunction,
    disjunction,
    implication,
    equivalence,
  };

  BoolExpr() : BoolExpr(constant(true)) {}

  static BoolExpr constant(bool value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = value;
    return BoolExpr(std::move(n));
  }

  static BoolExpr var(const VarTable& vars, std::string_view name) {
    return leaf(Kind::variable, vars, name);
  }

  static BoolExpr next_var(const VarTable& vars, std::string_view name) {
    return leaf(Kind::next_variable, vars, name);
  }

  Kind kind() const { return node_->kind; }
  bool uses_next() const { return node_->has_next; }

  // Valid for the node kinds that define them.
  bool const_value() const { return node_->value; }
  int var_index() const { return node_->var; }
  const std::string& var_name() const { return node_->name; }
  BoolExpr lhs() const { return BoolExpr(node_->lhs); }
  BoolExpr rhs() const { return BoolExpr(node_->rhs); }

  friend BoolExpr negate(const BoolExpr& e) { return unary(Kind::negation, e); }
  friend BoolExpr conjoin(const BoolExpr& a, const BoolExpr& b) {
    return binary(Kind::conjunction, a, b);
  }
  friend BoolExpr disjoin(const BoolExpr& a, const BoolExpr& b) {
    return binary(Kind::disjunction, a, b);
  }
  friend BoolExpr impl(const BoolExpr& a, const BoolExpr& b) {
    return binary(Kind::implication, a, b);
  }
  friend BoolExpr iff(const BoolExpr& a, const BoolExpr& b) {
    return binary(Kind::equivalence, a, b);
  }

 private:
  struct Node {
    Kind kind = Kind::constant;
    bool value = false;
    int var = -1;
    std::string name;
    std::shared_ptr<const Node> lhs, rhs;
    bool has_next = false;
  };

  explicit BoolExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static BoolExpr leaf(Kind k, const VarTable& vars, std::string_view name) {
    int idx = vars.index_of(name);
    if (idx < 0) throw undeclared_variable(std::string(name));
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->var = idx;
    n->name = std::string(name);
    n->has_next = (k == Kind::next_variable);
    return BoolExpr(std::move(n));
  }

  static BoolExpr unary(Kind k, const BoolExpr& a) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = a.node_;
    n->has_next = a.uses_next();
    return BoolExpr(std::move(n));
  }

  static BoolExpr binary(Kind k, const BoolExpr& a, const BoolExpr& b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = a.node_;
    n->rhs = b.node_;
    n->has_next = a.uses_next() || b.uses_next();
    return BoolExpr(std::move(n));
  }

  std::shared_ptr<const Node> node_;
};

inline BoolExpr conjoin_all(std::span<const BoolExpr> es) {
  if (es.empty()) return BoolExpr::constant(true);
  BoolExpr acc = es[0];
  for (std::size_t i = 1; i < es.size(); ++i) acc = conjoin(acc, es[i]);
  return acc;
}

inline BoolExpr disjoin_all(std::span<const BoolExpr> es) {
  if (es.empty()) return BoolExpr::constant(false);
  BoolExpr acc = es[0];
  for (std::size_t i = 1; i < es.size(); ++i) acc = disjoin(acc, es[i]);
  return acc;
}

/// Truth value with `variable` atoms read from `cur` and `next_variable`
/// atoms read from `nxt`.
inline bool eval_pair(const BoolExpr& e, Symbol cur, Symbol nxt) {
  switch (e.kind()) {
    case BoolExpr::Kind::constant: return e.const_value();
    case BoolExpr::Kind::variable: return cur.get(e.var_index());
    case BoolExpr::Kind::next_variable: return nxt.get(e.var_index());
    case BoolExpr::Kind::negation: return !eval_pair(e.lhs(), cur, nxt);
    case BoolExpr::Kind::conjunction: return eval_pair(e.lhs(), cur, nxt) && eval_pair(e.rhs(), cur, nxt);
    case BoolExpr::Kind::disjunction: return eval_pair(e.lhs(), cur, nxt) || eval_pair(e.rhs(), cur, nxt);
    case BoolExpr::Kind::implication: return !eval_pair(e.lhs(), cur, nxt) || eval_pair(e.rhs(), cur, nxt);
    case BoolExpr::Kind::equivalence: return eval_pair(e.lhs(), cur, nxt) == eval_pair(e.rhs(), cur, nxt);
  }
  return false;  // unreachable
}

/// Truth value of a next-free expression under `cur`.
inline bool eval_single(const BoolExpr& e, Symbol cur) {
  if (e.uses_next())
    throw contract_error("eval_single requires a next-free expression");
  return eval_pair(e, cur, Symbol{0});
}

/// Number of symbols satisfying a next-free expression, by exhaustive
/// enumeration of the alphabet.
inline std::uint64_t count_sat_single(const BoolExpr& e, const VarTable& vars) {
  if (e.uses_next())
    throw contract_error("count_sat_single requires a next-free expression");
  std::uint64_t count = 0;
  for (std::uint32_t b = 0; b < vars.alphabet_size(); ++b)
    if (eval_pair(e, Symbol{b}, Symbol{0})) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// Vectorized evaluation. A truth table is a bit vector indexed by symbol;
// automaton construction evaluates the invariant against all successor
// symbols of one state in a single pass over these words.

namespace detail {

constexpr std::uint64_t kLowVarPattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

// Word w of the bit vector over symbols where bit sigma = sigma's value of
// variable `var`.
inline std::uint64_t var_pattern_word(int var, std::size_t w) {
  if (var < 6) return kLowVarPattern[var];
  return ((w >> (var - 6)) & 1u) ? ~std::uint64_t{0} : std::uint64_t{0};
}

enum class AtomSource { current_fixed, current_varying, next_varying };

template <AtomSource CurSrc, AtomSource NextSrc>
inline void truth_table_rec(const BoolExpr& e, Symbol fixed_cur,
                            std::vector<std::uint64_t>& out) {
  const std::size_t words = out.size();
  switch (e.kind()) {
    case BoolExpr::Kind::constant: {
      std::uint64_t fill = e.const_value() ? ~std::uint64_t{0} : 0;
      std::fill(out.begin(), out.end(), fill);
      return;
    }
    case BoolExpr::Kind::variable: {
      if constexpr (CurSrc == AtomSource::current_fixed) {
        std::uint64_t fill = fixed_cur.get(e.var_index()) ? ~std::uint64_t{0} : 0;
        std::fill(out.begin(), out.end(), fill);
      } else {
        for (std::size_t w = 0; w < words; ++w) out[w] = var_pattern_word(e.var_index(), w);
      }
      return;
    }
    case BoolExpr::Kind::next_variable: {
      for (std::size_t w = 0; w < words; ++w) out[w] = var_pattern_word(e.var_index(), w);
      return;
    }
    case BoolExpr::Kind::negation: {
      truth_table_rec<CurSrc, NextSrc>(e.lhs(), fixed_cur, out);
      for (auto& w : out) w = ~w;
      return;
    }
    default: {
      std::vector<std::uint64_t> rhs(words);
      truth_table_rec<CurSrc, NextSrc>(e.lhs(), fixed_cur, out);
      truth_table_rec<CurSrc, NextSrc>(e.rhs(), fixed_cur, rhs);
      switch (e.kind()) {
        case BoolExpr::Kind::conjunction:
          for (std::size_t w = 0; w < words; ++w) out[w] &= rhs[w];
          break;
        case BoolExpr::Kind::disjunction:
          for (std::size_t w = 0; w < words; ++w) out[w] |= rhs[w];
          break;
        case BoolExpr::Kind::implication:
          for (std::size_t w = 0; w < words; ++w) out[w] = ~out[w] | rhs[w];
          break;
        case BoolExpr::Kind::equivalence:
          for (std::size_t w = 0; w < words; ++w) out[w] = ~(out[w] ^ rhs[w]);
          break;
        default: break;
      }
      return;
    }
  }
}

inline void mask_tail(std::vector<std::uint64_t>& out, std::uint32_t r) {
  if (r % 64 != 0) out.back() &= (std::uint64_t{1} << (r % 64)) - 1;
}

}  // namespace detail

/// Bit vector over all symbols sigma; bit sigma is eval_single(e, sigma).
inline std::vector<std::uint64_t> truth_table_single(const BoolExpr& e, const VarTable& vars) {
  if (e.uses_next())
    throw contract_error("truth_table_single requires a next-free expression");
  const std::uint32_t r = vars.alphabet_size();
  std::vector<std::uint64_t> out((r + 63) / 64);
  detail::truth_table_rec<detail::AtomSource::current_varying, detail::AtomSource::next_varying>(
      e, Symbol{0}, out);
  detail::mask_tail(out, r);
  return out;
}

/// Bit vector over all successor symbols tau; bit tau is eval_pair(e, cur, tau).
inline std::vector<std::uint64_t> truth_table_next(const BoolExpr& e, const VarTable& vars,
                                                   Symbol cur) {
  const std::uint32_t r = vars.alphabet_size();
  std::vector<std::uint64_t> out((r + 63) / 64);
  detail::truth_table_rec<detail::AtomSource::current_fixed, detail::AtomSource::next_varying>(
      e, cur, out);
  detail::mask_tail(out, r);
  return out;
}

// ---------------------------------------------------------------------------
// Concrete syntax.
//
//   expr  := iff
//   iff   := impl ('<->' impl)*            left-associative
//   impl  := or ('->' impl)?               right-associative
//   or    := and ('|' and)*
//   and   := unary ('&' unary)*
//   unary := '!' unary | atom
//   atom  := 'true' | 'false' | ident | 'next' '(' ident ')' | '(' expr ')'

namespace detail {

struct Token {
  enum class Type { ident, punct, end } type = Type::end;
  std::string text;
  int line = 1;
  int column = 1;
};

class Tokenizer {
 public:
  explicit Tokenizer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw parse_error(msg + " at line " + std::to_string(tok_.line) + ", column " +
                          std::to_string(tok_.column),
                      tok_.line, tok_.column);
  }

 private:
  void advance() {
    skip_space_and_comments();
    tok_ = Token{Token::Type::end, "", line_, column_};
    if (pos_ >= text_.size()) return;
    char c = text_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
        consume();
      tok_.type = Token::Type::ident;
      tok_.text = std::string(text_.substr(start, pos_ - start));
      return;
    }
    tok_.type = Token::Type::punct;
    if (c == '-' || c == '<') {
      // '->' and '<->'
      std::size_t start = pos_;
      consume();
      if (c == '<' && pos_ < text_.size() && text_[pos_] == '-') consume();
      if (pos_ < text_.size() && text_[pos_] == '>') consume();
      tok_.text = std::string(text_.substr(start, pos_ - start));
      if (tok_.text != "->" && tok_.text != "<->")
        throw parse_error("unexpected character '" + tok_.text + "' at line " +
                              std::to_string(tok_.line) + ", column " + std::to_string(tok_.column),
                          tok_.line, tok_.column);
      return;
    }
    if (std::string_view("!&|();").find(c) == std::string_view::npos)
      throw parse_error(std::string("unexpected character '") + c + "' at line " +
                            std::to_string(line_) + ", column " + std::to_string(column_),
                        line_, column_);
    consume();
    tok_.text = std::string(1, c);
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') consume();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        consume();
      } else {
        break;
      }
    }
  }

  void consume() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
  Token tok_;
};

class ExprParser {
 public:
  ExprParser(Tokenizer& toks, const VarTable& vars) : toks_(toks), vars_(vars) {}

  BoolExpr parse() { return parse_iff(); }

 private:
  BoolExpr parse_iff() {
    BoolExpr e = parse_impl();
    while (is_punct("<->")) {
      toks_.take();
      e = iff(e, parse_impl());
    }
    return e;
  }

  BoolExpr parse_impl() {
    BoolExpr e = parse_or();
    if (is_punct("->")) {
      toks_.take();
      return impl(e, parse_impl());
    }
    return e;
  }

  BoolExpr parse_or() {
    BoolExpr e = parse_and();
    while (is_punct("|")) {
      toks_.take();
      e = disjoin(e, parse_and());
    }
    return e;
  }

  BoolExpr parse_and() {
    BoolExpr e = parse_unary();
    while (is_punct("&")) {
      toks_.take();
      e = conjoin(e, parse_unary());
    }
    return e;
  }

  BoolExpr parse_unary() {
    if (is_punct("!")) {
      toks_.take();
      return negate(parse_unary());
    }
    return parse_atom();
  }

  BoolExpr parse_atom() {
    const Token& t = toks_.peek();
    if (t.type == Token::Type::punct && t.text == "(") {
      toks_.take();
      BoolExpr e = parse_iff();
      expect_punct(")");
      return e;
    }
    if (t.type != Token::Type::ident) toks_.fail("expected an atom");
    if (t.text == "true") {
      toks_.take();
      return BoolExpr::constant(true);
    }
    if (t.text == "false") {
      toks_.take();
      return BoolExpr::constant(false);
    }
    if (t.text == "next") {
      toks_.take();
      expect_punct("(");
      const Token& name = toks_.peek();
      if (name.type != Token::Type::ident || detail::is_reserved(name.text))
        toks_.fail("expected a variable name inside next(...)");
      BoolExpr e = make_leaf(name, /*next=*/true);
      toks_.take();
      expect_punct(")");
      return e;
    }
    BoolExpr e = make_leaf(t, /*next=*/false);
    toks_.take();
    return e;
  }

  BoolExpr make_leaf(const Token& t, bool next) {
    if (vars_.index_of(t.text) < 0)
      throw undeclared_variable(t.text, t.line, t.column);
    return next ? BoolExpr::next_var(vars_, t.text) : BoolExpr::var(vars_, t.text);
  }

  bool is_punct(std::string_view p) const {
    return toks_.peek().type == Token::Type::punct && toks_.peek().text == p;
  }

  void expect_punct(std::string_view p) {
    if (!is_punct(p)) toks_.fail("expected '" + std::string(p) + "'");
    toks_.take();
  }

  Tokenizer& toks_;
  const VarTable& vars_;
};

}  // namespace detail

/// Parses one expression; the whole input must be consumed.
inline BoolExpr parse_expr(std::string_view text, const VarTable& vars) {
  detail::Tokenizer toks(text);
  detail::ExprParser parser(toks, vars);
  BoolExpr e = parser.parse();
  if (toks.peek().type != detail::Token::Type::end) toks.fail("trailing input after expression");
  return e;
}

namespace detail {

// Binding strength used to decide where parentheses are required.
inline int precedence(BoolExpr::Kind k) {
  switch (k) {
    case BoolExpr::Kind::equivalence: return 0;
    case BoolExpr::Kind::implication: return 1;
    case BoolExpr::Kind::disjunction: return 2;
    case BoolExpr::Kind::conjunction: return 3;
    case BoolExpr::Kind::negation: return 4;
    default: return 5;
  }
}

inline void print_expr(const BoolExpr& e, int min_level, std::string& out) {
  const int level = precedence(e.kind());
  const bool parens = level < min_level;
  if (parens) out += '(';
  switch (e.kind()) {
    case BoolExpr::Kind::constant:
      out += e.const_value() ? "true" : "false";
      break;
    case BoolExpr::Kind::variable:
      out += e.var_name();
      break;
    case BoolExpr::Kind::next_variable:
      out += "next(" + e.var_name() + ")";
      break;
    case BoolExpr::Kind::negation:
      out += '!';
      print_expr(e.lhs(), level, out);
      break;
    case BoolExpr::Kind::conjunction:
      print_expr(e.lhs(), level, out);
      out += " & ";
      print_expr(e.rhs(), level + 1, out);
      break;
    case BoolExpr::Kind::disjunction:
      print_expr(e.lhs(), level, out);
      out += " | ";
      print_expr(e.rhs(), level + 1, out);
      break;
    case BoolExpr::Kind::implication:
      print_expr(e.lhs(), level + 1, out);
      out += " -> ";
      print_expr(e.rhs(), level, out);
      break;
    case BoolExpr::Kind::equivalence:
      print_expr(e.lhs(), level, out);
      out += " <-> ";
      print_expr(e.rhs(), level + 1, out);
      break;
  }
  if (parens) out += ')';
}

}  // namespace detail

/// Round-trippable rendering with minimal parentheses.
inline std::string to_string(const BoolExpr& e) {
  std::string out;
  detail::print_expr(e, 0, out);
  return out;
}

}  // namespace gr1w
