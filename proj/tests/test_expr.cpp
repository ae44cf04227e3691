#include <catch2/catch_amalgamated.hpp>

#include "gr1w/expr.hpp"
#include "helpers.hpp"

using namespace gr1w;
using testutil::Rng;

TEST_CASE("parse_expr builds the documented shapes") {
  VarTable vars({"a", "b"});

  BoolExpr e = parse_expr("a -> next(b)", vars);
  REQUIRE(e.kind() == BoolExpr::Kind::implication);
  REQUIRE(e.lhs().kind() == BoolExpr::Kind::variable);
  REQUIRE(e.lhs().var_name() == "a");
  REQUIRE(e.rhs().kind() == BoolExpr::Kind::next_variable);
  REQUIRE(e.rhs().var_name() == "b");
  REQUIRE(e.uses_next());

  VarTable abc({"a", "b", "c"});
  BoolExpr f = parse_expr("!(a & b) | c", abc);
  REQUIRE(f.kind() == BoolExpr::Kind::disjunction);
  REQUIRE(f.lhs().kind() == BoolExpr::Kind::negation);
  REQUIRE(f.lhs().lhs().kind() == BoolExpr::Kind::conjunction);
  REQUIRE(f.rhs().var_name() == "c");
}

TEST_CASE("parse_expr reports undeclared variables by name") {
  VarTable vars({"a", "b"});
  try {
    parse_expr("a -> d", vars);
    FAIL("expected undeclared_variable");
  } catch (const undeclared_variable& e) {
    REQUIRE(e.name == "d");
    REQUIRE(e.line == 1);
  }
}

TEST_CASE("parse_expr reports syntax errors with positions") {
  VarTable vars({"a"});
  try {
    parse_expr("a & & a", vars);
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    REQUIRE(e.line == 1);
    REQUIRE(e.column == 5);
  }
  REQUIRE_THROWS_AS(parse_expr("a &", vars), parse_error);
  REQUIRE_THROWS_AS(parse_expr("(a", vars), parse_error);
  REQUIRE_THROWS_AS(parse_expr("a b", vars), parse_error);
  REQUIRE_THROWS_AS(parse_expr("next(next(a))", vars), parse_error);
  REQUIRE_THROWS_AS(parse_expr("next(true)", vars), parse_error);
}

TEST_CASE("operator precedence and associativity") {
  VarTable vars({"a", "b", "c"});
  Symbol none{0};

  // ! binds tighter than &, & tighter than |, | tighter than ->.
  BoolExpr e = parse_expr("!a & b | c -> a", vars);
  REQUIRE(e.kind() == BoolExpr::Kind::implication);
  REQUIRE(e.lhs().kind() == BoolExpr::Kind::disjunction);
  REQUIRE(e.lhs().lhs().kind() == BoolExpr::Kind::conjunction);
  REQUIRE(e.lhs().lhs().lhs().kind() == BoolExpr::Kind::negation);

  // -> is right-associative: a -> (b -> c)
  BoolExpr r = parse_expr("a -> b -> c", vars);
  REQUIRE(r.lhs().var_name() == "a");
  REQUIRE(r.rhs().kind() == BoolExpr::Kind::implication);
  // false -> (false -> false) is true; (false -> false) -> false is false
  REQUIRE(eval_pair(r, none, none));

  // <-> is left-associative: (a <-> b) <-> c
  BoolExpr l = parse_expr("a <-> b <-> c", vars);
  REQUIRE(l.kind() == BoolExpr::Kind::equivalence);
  REQUIRE(l.lhs().kind() == BoolExpr::Kind::equivalence);
  REQUIRE(l.rhs().var_name() == "c");
}

TEST_CASE("eval_pair reads current and next symbols") {
  VarTable vars({"a", "b"});
  BoolExpr e = parse_expr("a -> next(b)", vars);
  Symbol sa{0b01}, sb{0b10}, none{0};
  REQUIRE(eval_pair(e, sa, sb));
  REQUIRE_FALSE(eval_pair(e, sa, none));
  REQUIRE(eval_pair(e, none, none));  // vacuous
}

TEST_CASE("eval_single rejects next-step expressions") {
  VarTable vars({"a", "b"});
  REQUIRE(eval_single(parse_expr("a | b", vars), Symbol{0b10}));
  REQUIRE(eval_single(BoolExpr::constant(true), Symbol{0}));
  REQUIRE_THROWS_AS(eval_single(parse_expr("next(a)", vars), Symbol{0}), contract_error);
}

TEST_CASE("count_sat_single enumerates the alphabet") {
  VarTable ab({"a", "b"});
  VarTable abc({"a", "b", "c"});
  REQUIRE(count_sat_single(BoolExpr::constant(true), ab) == 4);
  REQUIRE(count_sat_single(parse_expr("a & b & !c", abc), abc) == 1);
  REQUIRE(count_sat_single(parse_expr("a | b", ab), ab) == 3);
  REQUIRE_THROWS_AS(count_sat_single(parse_expr("next(a)", ab), ab), contract_error);
}

TEST_CASE("constructor helpers") {
  VarTable vars({"a"});
  std::vector<BoolExpr> none;
  REQUIRE(eval_single(conjoin_all(none), Symbol{0}));
  REQUIRE_FALSE(eval_single(disjoin_all(none), Symbol{0}));
  std::vector<BoolExpr> two{BoolExpr::var(vars, "a"), BoolExpr::constant(false)};
  REQUIRE_FALSE(eval_single(conjoin_all(two), Symbol{1}));
  REQUIRE(eval_single(disjoin_all(two), Symbol{1}));
}

TEST_CASE("VarTable validates names and caps") {
  REQUIRE_THROWS_AS(VarTable({"a", "a"}), parse_error);
  REQUIRE_THROWS_AS(VarTable({"2x"}), parse_error);
  REQUIRE_THROWS_AS(VarTable({"next"}), parse_error);
  std::vector<std::string> many;
  for (int i = 0; i < 17; ++i) many.push_back("v" + std::to_string(i));
  REQUIRE_THROWS_AS(VarTable(many), cap_exceeded);
  REQUIRE(VarTable(many, 20).size() == 17);
  for (int i = 17; i < 25; ++i) many.push_back("v" + std::to_string(i));
  REQUIRE_THROWS_AS(VarTable(many, 32), cap_exceeded);  // hard engine limit
}

TEST_CASE("negation duality under eval_pair") {
  Rng rng(20240001);
  VarTable vars = testutil::small_vars(3);
  for (int i = 0; i < 300; ++i) {
    BoolExpr e = testutil::random_expr(rng, vars, 4, true);
    Symbol cur = testutil::rand_symbol(rng, vars);
    Symbol nxt = testutil::rand_symbol(rng, vars);
    REQUIRE(eval_pair(negate(e), cur, nxt) == !eval_pair(e, cur, nxt));
  }
}

TEST_CASE("count_sat of an expression and its negation partition the alphabet") {
  Rng rng(20240002);
  for (int n = 1; n <= 4; ++n) {
    VarTable vars = testutil::small_vars(n);
    for (int i = 0; i < 60; ++i) {
      BoolExpr e = testutil::random_expr(rng, vars, 4, false);
      REQUIRE(count_sat_single(e, vars) + count_sat_single(negate(e), vars) ==
              vars.alphabet_size());
    }
  }
}

TEST_CASE("parse / print round trip is evaluation-stable") {
  Rng rng(20240003);
  for (int n = 1; n <= 4; ++n) {
    VarTable vars = testutil::small_vars(n);
    for (int i = 0; i < 40; ++i) {
      BoolExpr e = testutil::random_expr(rng, vars, 4, true);
      std::string printed = to_string(e);
      BoolExpr back = parse_expr(printed, vars);
      REQUIRE(to_string(back) == printed);
      for (std::uint32_t c = 0; c < vars.alphabet_size(); ++c)
        for (std::uint32_t x = 0; x < vars.alphabet_size(); ++x)
          REQUIRE(eval_pair(back, Symbol{c}, Symbol{x}) == eval_pair(e, Symbol{c}, Symbol{x}));
    }
  }
}

TEST_CASE("truth tables match pointwise evaluation across word boundaries") {
  Rng rng(20240004);
  for (int n : {1, 3, 6, 7}) {
    VarTable vars = testutil::small_vars(n);
    for (int i = 0; i < 25; ++i) {
      BoolExpr pair_expr = testutil::random_expr(rng, vars, 4, true);
      Symbol cur = testutil::rand_symbol(rng, vars);
      auto row = truth_table_next(pair_expr, vars, cur);
      for (std::uint32_t t = 0; t < vars.alphabet_size(); ++t) {
        bool bit = (row[t / 64] >> (t % 64)) & 1;
        REQUIRE(bit == eval_pair(pair_expr, cur, Symbol{t}));
      }
      BoolExpr single = testutil::random_expr(rng, vars, 4, false);
      auto table = truth_table_single(single, vars);
      for (std::uint32_t s = 0; s < vars.alphabet_size(); ++s) {
        bool bit = (table[s / 64] >> (s % 64)) & 1;
        REQUIRE(bit == eval_single(single, Symbol{s}));
      }
    }
  }
}
