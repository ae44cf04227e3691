#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gr1w/errors.hpp"
#include "gr1w/expr.hpp"

namespace gr1w {

enum class UnitKind { init, inv, fair };
enum class Side { env, sys };
enum class SideFilter { env_only, sys_only, all };

inline std::string_view to_string(UnitKind k) {
  switch (k) {
    case UnitKind::init: return "init";
    case UnitKind::inv: return "inv";
    case UnitKind::fair: return "fair";
  }
  return "?";
}

inline std::string_view to_string(Side s) { return s == Side::env ? "env" : "sys"; }

/// One typed conjunct of a specification. Initial conditions and fairness
/// conditions are next-free; invariants may constrain the next step.
struct Gr1Unit {
  UnitKind kind;
  Side side;
  BoolExpr expr;
  std::string label;  // free text, only used in reports
};

namespace detail {

inline bool expr_over_table(const BoolExpr& e, const VarTable& vars) {
  switch (e.kind()) {
    case BoolExpr::Kind::constant: return true;
    case BoolExpr::Kind::variable:
    case BoolExpr::Kind::next_variable:
      return vars.index_of(e.var_name()) == e.var_index();
    case BoolExpr::Kind::negation: return expr_over_table(e.lhs(), vars);
    default: return expr_over_table(e.lhs(), vars) && expr_over_table(e.rhs(), vars);
  }
}

inline void check_unit(const Gr1Unit& u, const VarTable& vars) {
  if (u.kind != UnitKind::inv && u.expr.uses_next())
    throw contract_error(std::string(to_string(u.kind)) + " unit must be next-free");
  if (!expr_over_table(u.expr, vars))
    throw table_mismatch("unit expression is not over the spec's variable table");
}

}  // namespace detail

/// A GR(1) specification: a variable table plus an ordered list of units.
/// Immutable once built.
class Gr1Spec {
 public:
  Gr1Spec() = default;
  explicit Gr1Spec(VarTable vars, std::vector<Gr1Unit> units = {}) : vars_(std::move(vars)) {
    for (auto& u : units) add_unit(std::move(u));
  }

  const VarTable& vars() const { return vars_; }
  const std::vector<Gr1Unit>& units() const { return units_; }

  void add_unit(Gr1Unit u) {
    detail::check_unit(u, vars_);
    units_.push_back(std::move(u));
  }

  std::size_t count(UnitKind k) const {
    std::size_t n = 0;
    for (const auto& u : units_)
      if (u.kind == k) ++n;
    return n;
  }

 private:
  VarTable vars_;
  std::vector<Gr1Unit> units_;
};

/// Keeps only units on the requested side(s); the variable table is shared.
inline Gr1Spec select(const Gr1Spec& spec, SideFilter filter) {
  Gr1Spec out(spec.vars());
  for (const auto& u : spec.units()) {
    if (filter == SideFilter::all || (filter == SideFilter::env_only && u.side == Side::env) ||
        (filter == SideFilter::sys_only && u.side == Side::sys))
      out.add_unit(u);
  }
  return out;
}

/// Appends refinement units to a copy of `base`. Every unit must be bound to
/// base's variable table.
inline Gr1Spec conjoin(const Gr1Spec& base, std::span<const Gr1Unit> refinement) {
  Gr1Spec out = base;
  for (const auto& u : refinement) out.add_unit(u);
  return out;
}

/// Conjoins a refinement spec; its variable declarations must be identical.
inline Gr1Spec conjoin(const Gr1Spec& base, const Gr1Spec& refinement) {
  if (!(base.vars() == refinement.vars()))
    throw table_mismatch("refinement declares a different variable table");
  return conjoin(base, std::span<const Gr1Unit>(refinement.units()));
}

/// The conjunction split a specification reduces to: one initial condition,
/// one invariant, and the ordered list of fairness expressions.
struct NormalForm {
  BoolExpr init;
  BoolExpr inv;
  std::vector<BoolExpr> fairs;
};

inline NormalForm normalize(const Gr1Spec& spec) {
  std::vector<BoolExpr> inits, invs;
  NormalForm nf;
  for (const auto& u : spec.units()) {
    switch (u.kind) {
      case UnitKind::init: inits.push_back(u.expr); break;
      case UnitKind::inv: invs.push_back(u.expr); break;
      case UnitKind::fair: nf.fairs.push_back(u.expr); break;
    }
  }
  nf.init = conjoin_all(inits);
  nf.inv = conjoin_all(invs);
  return nf;
}

// ---------------------------------------------------------------------------
// Spec files.
//
//   # comment to end of line
//   var <ident>;                     one or more; order defines Symbol bits
//   env|sys init <expr>;
//   env|sys inv G <expr>;
//   sys|env fair GF <expr>;
//
// next(...) is legal only inside inv units.

inline Gr1Spec parse_spec(std::string_view text, int max_vars = VarTable::default_max_vars) {
  detail::Tokenizer toks(text);
  std::vector<std::string> names;
  VarTable vars;
  std::vector<Gr1Unit> units;

  auto expect_semicolon = [&] {
    if (toks.peek().type != detail::Token::Type::punct || toks.peek().text != ";")
      toks.fail("expected ';'");
    toks.take();
  };

  while (toks.peek().type != detail::Token::Type::end) {
    detail::Token head = toks.take();
    if (head.type != detail::Token::Type::ident)
      throw parse_error("expected 'var', 'env' or 'sys' at line " + std::to_string(head.line),
                        head.line, head.column);

    if (head.text == "var") {
      detail::Token name = toks.take();
      if (name.type != detail::Token::Type::ident)
        throw parse_error("expected a variable name at line " + std::to_string(name.line),
                          name.line, name.column);
      if (detail::is_reserved(name.text) || name.text == "var" || name.text == "env" ||
          name.text == "sys" || name.text == "init" || name.text == "inv" ||
          name.text == "fair" || name.text == "G" || name.text == "GF")
        throw parse_error("'" + name.text + "' is a reserved word and cannot name a variable (line " +
                              std::to_string(name.line) + ")",
                          name.line, name.column);
      for (const auto& n : names)
        if (n == name.text)
          throw parse_error("duplicate variable '" + name.text + "' at line " +
                                std::to_string(name.line),
                            name.line, name.column);
      names.push_back(name.text);
      vars = VarTable(names, max_vars);
      expect_semicolon();
      continue;
    }

    Side side;
    if (head.text == "env")
      side = Side::env;
    else if (head.text == "sys")
      side = Side::sys;
    else
      throw parse_error("expected 'var', 'env' or 'sys', got '" + head.text + "' at line " +
                            std::to_string(head.line),
                        head.line, head.column);

    detail::Token kind_tok = toks.take();
    if (kind_tok.type != detail::Token::Type::ident)
      throw parse_error("expected 'init', 'inv' or 'fair' at line " + std::to_string(kind_tok.line),
                        kind_tok.line, kind_tok.column);

    UnitKind kind;
    if (kind_tok.text == "init") {
      kind = UnitKind::init;
    } else if (kind_tok.text == "inv") {
      kind = UnitKind::inv;
      detail::Token marker = toks.take();
      if (marker.type != detail::Token::Type::ident || marker.text != "G")
        throw parse_error("invariant unit requires the 'G' marker at line " +
                              std::to_string(marker.line),
                          marker.line, marker.column);
    } else if (kind_tok.text == "fair") {
      kind = UnitKind::fair;
      detail::Token marker = toks.take();
      if (marker.type != detail::Token::Type::ident || marker.text != "GF")
        throw parse_error("fairness unit requires the 'GF' marker at line " +
                              std::to_string(marker.line),
                          marker.line, marker.column);
    } else {
      throw parse_error("expected 'init', 'inv' or 'fair', got '" + kind_tok.text + "' at line " +
                            std::to_string(kind_tok.line),
                        kind_tok.line, kind_tok.column);
    }

    int expr_line = toks.peek().line;
    detail::ExprParser parser(toks, vars);
    BoolExpr e = parser.parse();
    if (kind != UnitKind::inv && e.uses_next())
      throw parse_error(std::string(to_string(kind)) + " unit must not contain next(...) (line " +
                            std::to_string(expr_line) + ")",
                        expr_line, 0);
    expect_semicolon();
    units.push_back(Gr1Unit{kind, side, std::move(e), ""});
  }

  Gr1Spec spec(vars);
  for (auto& u : units) spec.add_unit(std::move(u));
  return spec;
}

}  // namespace gr1w
