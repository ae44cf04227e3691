#include <fstream>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "gr1w/spec.hpp"
#include "helpers.hpp"

using namespace gr1w;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string bench(const std::string& name) { return std::string(GR1W_BENCH_DIR) + "/" + name; }

}  // namespace

TEST_CASE("parse_spec reads units in order") {
  Gr1Spec s = parse_spec("var a;\nenv inv G (a -> next(a));\n");
  REQUIRE(s.vars().size() == 1);
  REQUIRE(s.units().size() == 1);
  REQUIRE(s.units()[0].kind == UnitKind::inv);
  REQUIRE(s.units()[0].side == Side::env);
  REQUIRE(s.units()[0].expr.uses_next());
}

TEST_CASE("parse_spec rejects next outside invariants") {
  try {
    parse_spec("var a;\nenv fair GF next(a);\n");
    FAIL("expected parse_error");
  } catch (const parse_error& e) {
    REQUIRE(e.line == 2);
    REQUIRE(std::string(e.what()).find("fair") != std::string::npos);
  }
  REQUIRE_THROWS_AS(parse_spec("var a;\nenv init next(a);\n"), parse_error);
}

TEST_CASE("parse_spec flags duplicate variables, markers and malformed statements") {
  REQUIRE_THROWS_AS(parse_spec("var a;\nvar a;\n"), parse_error);
  REQUIRE_THROWS_AS(parse_spec("var a;\nenv inv a;\n"), parse_error);      // missing G
  REQUIRE_THROWS_AS(parse_spec("var a;\nenv fair G a;\n"), parse_error);   // GF, not G
  REQUIRE_THROWS_AS(parse_spec("var a;\nenv inv G a\n"), parse_error);     // missing ';'
  REQUIRE_THROWS_AS(parse_spec("var a;\nboth inv G a;\n"), parse_error);
  REQUIRE_THROWS_AS(parse_spec("var next;\n"), parse_error);
  try {
    parse_spec("var a;\nenv inv G (a -> next(b));\n");
    FAIL("expected undeclared_variable");
  } catch (const undeclared_variable& e) {
    REQUIRE(e.name == "b");
    REQUIRE(e.line == 2);
  }
}

TEST_CASE("parse_spec caps the variable count") {
  std::string text;
  for (int i = 0; i < 17; ++i) text += "var v" + std::to_string(i) + ";\n";
  REQUIRE_THROWS_AS(parse_spec(text), cap_exceeded);
  REQUIRE(parse_spec(text, 17).vars().size() == 17);
}

TEST_CASE("extended lift file has the documented shape") {
  Gr1Spec s = parse_spec(read_file(bench("ext_lift.gr1")));
  REQUIRE(s.vars().size() == 8);
  REQUIRE(select(s, SideFilter::env_only).units().size() == 7);
  REQUIRE(select(s, SideFilter::sys_only).units().size() == 13);
  REQUIRE(select(s, SideFilter::all).units().size() == 20);
  REQUIRE(select(Gr1Spec(s.vars()), SideFilter::env_only).units().empty());
}

TEST_CASE("select is idempotent") {
  testutil::Rng rng(20240101);
  VarTable vars = testutil::small_vars(3);
  for (int i = 0; i < 50; ++i) {
    Gr1Spec s = testutil::random_spec(rng, vars, 2, 2, true);
    for (SideFilter f : {SideFilter::env_only, SideFilter::sys_only, SideFilter::all}) {
      Gr1Spec once = select(s, f);
      Gr1Spec twice = select(once, f);
      REQUIRE(once.units().size() == twice.units().size());
    }
  }
}

TEST_CASE("conjoin appends units and rejects foreign tables") {
  Gr1Spec lift = parse_spec(read_file(bench("lift.gr1")));
  Gr1Spec fair_ref = parse_spec(read_file(bench("lift_ref_press_fair.gr1")));
  Gr1Spec refined = conjoin(lift, fair_ref);
  REQUIRE(refined.units().size() == lift.units().size() + 1);
  REQUIRE(refined.units().back().kind == UnitKind::fair);
  REQUIRE(lift.units().size() == 7);  // base unchanged

  Gr1Spec same = conjoin(lift, std::span<const Gr1Unit>{});
  REQUIRE(same.units().size() == lift.units().size());

  VarTable other({"x"});
  Gr1Unit foreign{UnitKind::inv, Side::env, BoolExpr::var(other, "x"), ""};
  REQUIRE_THROWS_AS(conjoin(lift, std::span<const Gr1Unit>(&foreign, 1)), table_mismatch);
  REQUIRE_THROWS_AS(conjoin(lift, parse_spec("var x;\nenv inv G x;\n")), table_mismatch);
}

TEST_CASE("normalize folds units into the conjunction form") {
  Gr1Spec two_invs = parse_spec("var a;\nvar b;\nenv inv G a;\nsys inv G b;\n");
  NormalForm nf = normalize(two_invs);
  REQUIRE(nf.fairs.empty());
  REQUIRE(eval_single(nf.init, Symbol{0}));  // no init unit -> true
  for (std::uint32_t c = 0; c < 4; ++c)
    REQUIRE(eval_pair(nf.inv, Symbol{c}, Symbol{0}) == (Symbol{c}.get(0) && Symbol{c}.get(1)));

  Gr1Spec g1 = parse_spec(read_file(bench("ab_fair_a.gr1")));
  NormalForm nf1 = normalize(g1);
  REQUIRE(eval_single(nf1.init, Symbol{0}));
  REQUIRE(nf1.fairs.size() == 1);
  REQUIRE_FALSE(eval_single(nf1.fairs[0], Symbol{0b10}));  // fairness is on a
  REQUIRE(eval_single(nf1.fairs[0], Symbol{0b01}));
  REQUIRE_FALSE(eval_pair(nf1.inv, Symbol{0b01}, Symbol{0b01}));  // a then !b
  REQUIRE(eval_pair(nf1.inv, Symbol{0b01}, Symbol{0b10}));
}

TEST_CASE("normalize after conjoin preserves fairness order") {
  testutil::Rng rng(20240102);
  VarTable vars = testutil::small_vars(3);
  for (int i = 0; i < 50; ++i) {
    Gr1Spec base = testutil::random_spec(rng, vars, 2, 2, true);
    Gr1Spec extra = testutil::random_spec(rng, vars, 1, 2, false);
    Gr1Spec merged = conjoin(base, std::span<const Gr1Unit>(extra.units()));
    NormalForm a = normalize(base);
    NormalForm b = normalize(extra);
    NormalForm m = normalize(merged);
    REQUIRE(m.fairs.size() == a.fairs.size() + b.fairs.size());
    for (std::size_t k = 0; k < m.fairs.size(); ++k) {
      const BoolExpr& expect = k < a.fairs.size() ? a.fairs[k] : b.fairs[k - a.fairs.size()];
      for (std::uint32_t s = 0; s < vars.alphabet_size(); ++s)
        REQUIRE(eval_single(m.fairs[k], Symbol{s}) == eval_single(expect, Symbol{s}));
    }
  }
}

TEST_CASE("programmatic unit construction enforces the kind contract") {
  VarTable vars({"a"});
  Gr1Spec s(vars);
  REQUIRE_THROWS_AS(
      s.add_unit({UnitKind::fair, Side::env, BoolExpr::next_var(vars, "a"), ""}),
      contract_error);
  REQUIRE_THROWS_AS(
      s.add_unit({UnitKind::init, Side::env, BoolExpr::next_var(vars, "a"), ""}),
      contract_error);
  s.add_unit({UnitKind::inv, Side::env, BoolExpr::next_var(vars, "a"), ""});
  REQUIRE(s.units().size() == 1);
}
