#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "gr1w/errors.hpp"
#include "gr1w/expr.hpp"

namespace gr1w {

/// Explicit-state deterministic automaton of an invariant. Non-initial
/// states are labeled bijectively by symbols; the implicit initial state q0
/// is represented by the per-state `initial` flag (the symbols enabled as a
/// first step). Fairness expressions ride along so that every restriction
/// can refresh the membership masks.
///
/// State indices are positions in `labels`, which is kept sorted by symbol;
/// successor lists are sorted, so iteration order is deterministic.
struct LabeledAutomaton {
  int var_count = 0;
  std::uint32_t alphabet_size = 1;
  std::vector<Symbol> labels;
  std::vector<std::int32_t> state_of;              // symbol -> state index, -1 if absent
  std::vector<std::vector<std::int32_t>> succ;
  std::vector<char> initial;                       // enabled from q0
  std::vector<BoolExpr> fair_exprs;
  std::vector<std::vector<char>> fair_mask;        // fair_mask[i][state]

  std::size_t state_count() const { return labels.size(); }
  bool empty() const { return labels.empty(); }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ) n += s.size();
    return n;
  }

  std::int32_t state(Symbol s) const { return state_of[s.bits]; }

  bool has_edge(std::int32_t from, std::int32_t to) const {
    return std::binary_search(succ[from].begin(), succ[from].end(), to);
  }

  /// States whose labels satisfy fairness expression i.
  std::vector<std::int32_t> fair_set(std::size_t i) const {
    std::vector<std::int32_t> out;
    for (std::size_t q = 0; q < labels.size(); ++q)
      if (fair_mask[i][q]) out.push_back(static_cast<std::int32_t>(q));
    return out;
  }
};

namespace detail {

inline void recompute_fair_masks(LabeledAutomaton& a) {
  a.fair_mask.assign(a.fair_exprs.size(), {});
  for (std::size_t i = 0; i < a.fair_exprs.size(); ++i) {
    auto& mask = a.fair_mask[i];
    mask.resize(a.labels.size());
    for (std::size_t q = 0; q < a.labels.size(); ++q)
      mask[q] = eval_single(a.fair_exprs[i], a.labels[q]);
  }
}

// Copy of `a` keeping exactly the states with keep[q] set; edges to dropped
// states disappear, initial flags carry over.
inline LabeledAutomaton subautomaton(const LabeledAutomaton& a, const std::vector<char>& keep) {
  LabeledAutomaton out;
  out.var_count = a.var_count;
  out.alphabet_size = a.alphabet_size;
  out.fair_exprs = a.fair_exprs;
  out.state_of.assign(a.alphabet_size, -1);

  std::vector<std::int32_t> remap(a.labels.size(), -1);
  for (std::size_t q = 0; q < a.labels.size(); ++q) {
    if (!keep[q]) continue;
    remap[q] = static_cast<std::int32_t>(out.labels.size());
    out.labels.push_back(a.labels[q]);
    out.state_of[a.labels[q].bits] = remap[q];
    out.initial.push_back(a.initial[q]);
  }
  out.succ.resize(out.labels.size());
  for (std::size_t q = 0; q < a.labels.size(); ++q) {
    if (!keep[q]) continue;
    auto& row = out.succ[remap[q]];
    for (std::int32_t t : a.succ[q])
      if (keep[t]) row.push_back(remap[t]);
  }
  recompute_fair_masks(out);
  return out;
}

inline std::vector<char> reachable_from_initial(const LabeledAutomaton& a,
                                                const std::vector<char>& initial) {
  std::vector<char> seen(a.labels.size(), 0);
  std::deque<std::int32_t> frontier;
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    if (initial[q]) {
      seen[q] = 1;
      frontier.push_back(static_cast<std::int32_t>(q));
    }
  while (!frontier.empty()) {
    std::int32_t q = frontier.front();
    frontier.pop_front();
    for (std::int32_t t : a.succ[q])
      if (!seen[t]) {
        seen[t] = 1;
        frontier.push_back(t);
      }
  }
  return seen;
}

}  // namespace detail

/// Removes states with no outgoing edge and states unreachable from q0 until
/// a fixpoint: every surviving state lies on an infinite path from q0.
inline LabeledAutomaton prune(const LabeledAutomaton& a) {
  const std::size_t n = a.labels.size();
  std::vector<char> alive(n, 1);
  std::vector<std::size_t> out_deg(n);
  std::vector<std::vector<std::int32_t>> preds(n);
  std::deque<std::int32_t> dead;
  for (std::size_t q = 0; q < n; ++q) {
    out_deg[q] = a.succ[q].size();
    if (out_deg[q] == 0) dead.push_back(static_cast<std::int32_t>(q));
    for (std::int32_t t : a.succ[q]) preds[t].push_back(static_cast<std::int32_t>(q));
  }
  // Cascade dead ends backwards.
  while (!dead.empty()) {
    std::int32_t q = dead.front();
    dead.pop_front();
    if (!alive[q]) continue;
    alive[q] = 0;
    for (std::int32_t p : preds[q])
      if (alive[p] && --out_deg[p] == 0) dead.push_back(p);
  }
  // Then a single reachability sweep; successors of reachable states are
  // reachable, so this cannot create new dead ends.
  LabeledAutomaton trimmed = detail::subautomaton(a, alive);
  std::vector<char> seen = detail::reachable_from_initial(trimmed, trimmed.initial);
  return detail::subautomaton(trimmed, seen);
}

/// Builds the labeled automaton of G inv: state q_sigma exists when sigma
/// can start or extend a pair satisfying the invariant, and q_sigma -> q_tau
/// exists exactly when the pair (sigma, tau) satisfies it. Dead branches are
/// pruned so that only prefixes of omega-words remain.
inline LabeledAutomaton build_invariant_automaton(const VarTable& vars, const BoolExpr& inv,
                                                  std::vector<BoolExpr> fairs = {}) {
  const std::uint32_t r = vars.alphabet_size();
  LabeledAutomaton a;
  a.var_count = vars.size();
  a.alphabet_size = r;
  a.fair_exprs = std::move(fairs);

  std::vector<std::vector<std::uint64_t>> rows(r);
  std::vector<char> present(r, 0);
  for (std::uint32_t s = 0; s < r; ++s) {
    rows[s] = truth_table_next(inv, vars, Symbol{s});
    bool any = false;
    for (std::uint64_t w : rows[s])
      if (w) {
        any = true;
        break;
      }
    if (any) {
      present[s] = 1;
      for (std::size_t w = 0; w < rows[s].size(); ++w) {
        std::uint64_t word = rows[s][w];
        while (word) {
          int b = std::countr_zero(word);
          word &= word - 1;
          present[static_cast<std::uint32_t>(w * 64 + b)] = 1;
        }
      }
    }
  }

  a.state_of.assign(r, -1);
  for (std::uint32_t s = 0; s < r; ++s) {
    if (!present[s]) continue;
    a.state_of[s] = static_cast<std::int32_t>(a.labels.size());
    a.labels.push_back(Symbol{s});
  }
  a.succ.resize(a.labels.size());
  a.initial.resize(a.labels.size(), 0);
  for (std::uint32_t s = 0; s < r; ++s) {
    std::int32_t q = a.state_of[s];
    if (q < 0) continue;
    auto& row = a.succ[q];
    for (std::size_t w = 0; w < rows[s].size(); ++w) {
      std::uint64_t word = rows[s][w];
      while (word) {
        int b = std::countr_zero(word);
        word &= word - 1;
        row.push_back(a.state_of[static_cast<std::uint32_t>(w * 64 + b)]);
      }
    }
    a.initial[q] = !row.empty();
  }
  detail::recompute_fair_masks(a);
  return prune(a);
}

/// Filters the initial transitions by a next-free condition and drops states
/// that become unreachable from q0.
inline LabeledAutomaton apply_init(const LabeledAutomaton& a, const BoolExpr& init_cond) {
  if (init_cond.uses_next())
    throw contract_error("initial condition must be next-free");
  LabeledAutomaton filtered = a;
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    filtered.initial[q] = a.initial[q] && eval_single(init_cond, a.labels[q]);
  std::vector<char> seen = detail::reachable_from_initial(filtered, filtered.initial);
  return detail::subautomaton(filtered, seen);
}

/// Subgraph induced by the states whose labels satisfy `keep`. No pruning:
/// the caller decides whether dead branches matter.
inline LabeledAutomaton restrict_to(const LabeledAutomaton& a,
                                    const std::function<bool(Symbol)>& keep) {
  std::vector<char> mask(a.labels.size());
  for (std::size_t q = 0; q < a.labels.size(); ++q) mask[q] = keep(a.labels[q]);
  return detail::subautomaton(a, mask);
}

/// Strongly connected components plus the flags dimension computations care
/// about. Components are listed in reverse topological order.
struct SccDecomposition {
  std::vector<std::vector<std::int32_t>> components;
  std::vector<char> trivial;                 // singleton without a self-loop
  std::vector<char> reachable;               // contains a state reachable from q0
  std::vector<std::int32_t> component_of;    // state -> component index
};

inline SccDecomposition scc(const LabeledAutomaton& a) {
  const std::int32_t n = static_cast<std::int32_t>(a.labels.size());
  SccDecomposition out;
  out.component_of.assign(n, -1);

  // Tarjan with an explicit frame stack; recursion depth would otherwise be
  // bounded only by the state count.
  std::vector<std::int32_t> index(n, -1), lowlink(n, 0);
  std::vector<char> on_stack(n, 0);
  std::vector<std::int32_t> stack;
  struct Frame {
    std::int32_t v;
    std::size_t next_child;
  };
  std::vector<Frame> frames;
  std::int32_t counter = 0;

  for (std::int32_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_child < a.succ[f.v].size()) {
        std::int32_t w = a.succ[f.v][f.next_child++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          std::vector<std::int32_t> comp;
          std::int32_t w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            out.component_of[w] = static_cast<std::int32_t>(out.components.size());
            comp.push_back(w);
          } while (w != f.v);
          std::sort(comp.begin(), comp.end());
          out.components.push_back(std::move(comp));
        }
        std::int32_t v = f.v;
        frames.pop_back();
        if (!frames.empty()) lowlink[frames.back().v] = std::min(lowlink[frames.back().v], lowlink[v]);
      }
    }
  }

  out.trivial.resize(out.components.size());
  for (std::size_t c = 0; c < out.components.size(); ++c)
    out.trivial[c] =
        out.components[c].size() == 1 && !a.has_edge(out.components[c][0], out.components[c][0]);

  std::vector<char> seen = detail::reachable_from_initial(a, a.initial);
  out.reachable.resize(out.components.size());
  for (std::size_t c = 0; c < out.components.size(); ++c)
    out.reachable[c] = !out.components[c].empty() && seen[out.components[c][0]];
  return out;
}

/// Debug rendering of the automaton as a DOT graph. Not a stable interface.
inline std::string to_dot(const LabeledAutomaton& a) {
  std::string out = "digraph invariant_automaton {\n  q0 [shape=point];\n";
  auto bits = [&](Symbol s) {
    std::string b;
    for (int i = a.var_count - 1; i >= 0; --i) b += s.get(i) ? '1' : '0';
    return b.empty() ? std::string("-") : b;
  };
  for (std::size_t q = 0; q < a.labels.size(); ++q) {
    std::string fairs;
    for (std::size_t i = 0; i < a.fair_mask.size(); ++i)
      if (a.fair_mask[i][q]) fairs += (fairs.empty() ? "F" : ",F") + std::to_string(i);
    out += "  s" + std::to_string(q) + " [label=\"" + bits(a.labels[q]);
    if (!fairs.empty()) out += " [" + fairs + "]";
    out += "\"];\n";
    if (a.initial[q]) out += "  q0 -> s" + std::to_string(q) + ";\n";
  }
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    for (std::int32_t t : a.succ[q])
      out += "  s" + std::to_string(q) + " -> s" + std::to_string(t) + ";\n";
  return out + "}\n";
}

}  // namespace gr1w
