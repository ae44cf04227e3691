#pragma once

// Shared generators and independent oracles for the test suites. Everything
// here is deliberately written against the semantic definitions (direct
// evaluation, explicit enumeration, path counting) rather than against the
// library's own computation paths.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "gr1w/automaton.hpp"
#include "gr1w/expr.hpp"
#include "gr1w/implication.hpp"
#include "gr1w/spec.hpp"

namespace testutil {

using Rng = std::mt19937_64;

inline gr1w::VarTable small_vars(int n) {
  static const char* names[] = {"a", "b", "c", "d", "e", "f", "g", "h"};
  std::vector<std::string> v;
  for (int i = 0; i < n; ++i) v.push_back(names[i]);
  return gr1w::VarTable(v);
}

inline int rand_int(Rng& rng, int lo, int hi) {
  return static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1)) + lo;
}

inline gr1w::Symbol rand_symbol(Rng& rng, const gr1w::VarTable& vars) {
  return gr1w::Symbol{static_cast<std::uint32_t>(rng() % vars.alphabet_size())};
}

/// Random expression tree. Depth 0 forces a leaf; `allow_next` controls
/// whether next-step atoms may appear.
inline gr1w::BoolExpr random_expr(Rng& rng, const gr1w::VarTable& vars, int depth,
                                  bool allow_next) {
  if (depth <= 0 || rand_int(rng, 0, 4) == 0) {
    int pick = rand_int(rng, 0, allow_next ? 3 : 2);
    switch (pick) {
      case 0: return gr1w::BoolExpr::constant(rand_int(rng, 0, 1) == 1);
      case 1:
      case 2: return gr1w::BoolExpr::var(vars, vars.name(rand_int(rng, 0, vars.size() - 1)));
      default: return gr1w::BoolExpr::next_var(vars, vars.name(rand_int(rng, 0, vars.size() - 1)));
    }
  }
  switch (rand_int(rng, 0, 4)) {
    case 0: return negate(random_expr(rng, vars, depth - 1, allow_next));
    case 1:
      return conjoin(random_expr(rng, vars, depth - 1, allow_next),
                     random_expr(rng, vars, depth - 1, allow_next));
    case 2:
      return disjoin(random_expr(rng, vars, depth - 1, allow_next),
                     random_expr(rng, vars, depth - 1, allow_next));
    case 3:
      return impl(random_expr(rng, vars, depth - 1, allow_next),
                  random_expr(rng, vars, depth - 1, allow_next));
    default:
      return iff(random_expr(rng, vars, depth - 1, allow_next),
                 random_expr(rng, vars, depth - 1, allow_next));
  }
}

/// Random spec over `vars`: optional init, a few invariants and fairness
/// conditions, sides alternating at random.
inline gr1w::Gr1Spec random_spec(Rng& rng, const gr1w::VarTable& vars, int max_inv, int max_fair,
                                 bool with_init) {
  gr1w::Gr1Spec spec(vars);
  auto side = [&] { return rand_int(rng, 0, 1) == 0 ? gr1w::Side::env : gr1w::Side::sys; };
  if (with_init && rand_int(rng, 0, 1) == 1)
    spec.add_unit({gr1w::UnitKind::init, side(), random_expr(rng, vars, 2, false), ""});
  int n_inv = rand_int(rng, 0, max_inv);
  for (int i = 0; i < n_inv; ++i)
    spec.add_unit({gr1w::UnitKind::inv, side(), random_expr(rng, vars, 3, true), ""});
  int n_fair = rand_int(rng, 0, max_fair);
  for (int i = 0; i < n_fair; ++i)
    spec.add_unit({gr1w::UnitKind::fair, side(), random_expr(rng, vars, 2, false), ""});
  return spec;
}

/// Number of distinct length-n prefixes of the automaton's closed language,
/// by dynamic-programming path counting from q0. Doubles keep the count
/// usable for n around 80 where exact integers overflow.
inline double prefix_count(const gr1w::LabeledAutomaton& a, int n) {
  std::vector<double> cur(a.state_count(), 0.0);
  for (std::size_t q = 0; q < a.state_count(); ++q)
    if (a.initial[q]) cur[q] = 1.0;
  for (int step = 1; step < n; ++step) {
    std::vector<double> next(a.state_count(), 0.0);
    for (std::size_t q = 0; q < a.state_count(); ++q) {
      if (cur[q] == 0.0) continue;
      for (std::int32_t t : a.succ[q]) next[t] += cur[q];
    }
    cur = std::move(next);
  }
  double total = 0.0;
  for (double c : cur) total += c;
  return total;
}

/// Exact variant for moderate n.
inline unsigned long long prefix_count_exact(const gr1w::LabeledAutomaton& a, int n) {
  std::vector<unsigned long long> cur(a.state_count(), 0);
  for (std::size_t q = 0; q < a.state_count(); ++q)
    if (a.initial[q]) cur[q] = 1;
  for (int step = 1; step < n; ++step) {
    std::vector<unsigned long long> next(a.state_count(), 0);
    for (std::size_t q = 0; q < a.state_count(); ++q) {
      if (cur[q] == 0) continue;
      for (std::int32_t t : a.succ[q]) next[t] += cur[q];
    }
    cur = std::move(next);
  }
  unsigned long long total = 0;
  for (auto c : cur) total += c;
  return total;
}

// ---------------------------------------------------------------------------
// Brute-force language inclusion over bounded lassos. Satisfaction masks are
// precomputed per stem and per loop so the double loop over lasso shapes
// stays cheap.

struct LassoOracle {
  // stems[k]: all symbol sequences of length k (0..max_stem)
  // loops[k]: all symbol sequences of length k (1..max_loop)
  int max_stem;
  int max_loop;
  std::uint32_t r;
  std::vector<std::vector<gr1w::Symbol>> stems, loops;

  LassoOracle(const gr1w::VarTable& vars, int max_stem_, int max_loop_)
      : max_stem(max_stem_), max_loop(max_loop_), r(vars.alphabet_size()) {
    stems.push_back({});  // the empty stem
    std::vector<gr1w::Symbol> word;
    for (int len = 1; len <= std::max(max_stem, max_loop); ++len) {
      word.assign(len, gr1w::Symbol{0});
      while (true) {
        if (len <= max_stem) stems.push_back(word);
        if (len <= max_loop) loops.push_back(word);
        int i = len - 1;
        while (i >= 0 && word[i].bits + 1 == r) word[i--] = gr1w::Symbol{0};
        if (i < 0) break;
        word[i] = gr1w::Symbol{word[i].bits + 1};
      }
    }
  }

  struct SpecFacts {
    std::vector<char> stem_ok;       // init + internal pairs
    std::vector<char> loop_ok;       // internal pairs + wrap + fairness
    std::vector<char> loop_ok_head;  // loop_ok and init holds on loop[0]
  };

  SpecFacts facts(const gr1w::Gr1Spec& spec, gr1w::SideFilter side) const {
    gr1w::NormalForm nf = gr1w::normalize(gr1w::select(spec, side));
    SpecFacts f;
    f.stem_ok.resize(stems.size());
    for (std::size_t i = 0; i < stems.size(); ++i) {
      const auto& s = stems[i];
      bool ok = s.empty() || gr1w::eval_single(nf.init, s[0]);
      for (std::size_t k = 0; ok && k + 1 < s.size(); ++k)
        ok = gr1w::eval_pair(nf.inv, s[k], s[k + 1]);
      f.stem_ok[i] = ok;
    }
    f.loop_ok.resize(loops.size());
    f.loop_ok_head.resize(loops.size());
    for (std::size_t i = 0; i < loops.size(); ++i) {
      const auto& l = loops[i];
      bool ok = true;
      for (std::size_t k = 0; ok && k + 1 < l.size(); ++k)
        ok = gr1w::eval_pair(nf.inv, l[k], l[k + 1]);
      if (ok) ok = gr1w::eval_pair(nf.inv, l.back(), l.front());
      for (const auto& fair : nf.fairs) {
        if (!ok) break;
        bool met = false;
        for (gr1w::Symbol s : l) met = met || gr1w::eval_single(fair, s);
        ok = met;
      }
      f.loop_ok[i] = ok;
      f.loop_ok_head[i] = ok && gr1w::eval_single(nf.init, l.front());
    }
    return f;
  }

  bool lasso_sat(const gr1w::NormalForm& nf, const SpecFacts& f, std::size_t si,
                 std::size_t li) const {
    if (stems[si].empty()) return f.loop_ok_head[li];
    return f.stem_ok[si] && f.loop_ok[li] &&
           gr1w::eval_pair(nf.inv, stems[si].back(), loops[li].front());
  }

  /// True when every bounded lasso of L(phi1) also lies in L(phi2).
  bool included(const gr1w::Gr1Spec& phi1, const gr1w::Gr1Spec& phi2,
                gr1w::SideFilter side) const {
    gr1w::NormalForm nf1 = gr1w::normalize(gr1w::select(phi1, side));
    gr1w::NormalForm nf2 = gr1w::normalize(gr1w::select(phi2, side));
    SpecFacts f1 = facts(phi1, side), f2 = facts(phi2, side);
    for (std::size_t si = 0; si < stems.size(); ++si)
      for (std::size_t li = 0; li < loops.size(); ++li)
        if (lasso_sat(nf1, f1, si, li) && !lasso_sat(nf2, f2, si, li)) return false;
    return true;
  }
};

}  // namespace testutil
