#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gr1w/automaton.hpp"
#include "gr1w/dimension.hpp"
#include "gr1w/errors.hpp"
#include "gr1w/spec.hpp"

namespace gr1w {

/// Ultimately periodic word stem . loop^omega. The loop is never empty.
struct Lasso {
  std::vector<Symbol> stem;
  std::vector<Symbol> loop;
};

struct InclusionVerdict {
  bool holds = true;
  std::optional<Lasso> witness;  // a word of L(first) \ L(second) when !holds
};

/// Direct semantic check of a lasso against a spec: the initial condition on
/// the first symbol, the invariant on every consecutive pair including the
/// loop wrap, and each fairness condition somewhere on the loop.
inline bool satisfies_lasso(const Gr1Spec& spec, SideFilter side, const Lasso& l) {
  if (l.loop.empty()) throw contract_error("lasso loop must be non-empty");
  NormalForm nf = normalize(select(spec, side));
  Symbol first = l.stem.empty() ? l.loop.front() : l.stem.front();
  if (!eval_single(nf.init, first)) return false;
  std::vector<Symbol> seq = l.stem;
  seq.insert(seq.end(), l.loop.begin(), l.loop.end());
  for (std::size_t i = 0; i + 1 < seq.size(); ++i)
    if (!eval_pair(nf.inv, seq[i], seq[i + 1])) return false;
  if (!eval_pair(nf.inv, l.loop.back(), l.loop.front())) return false;
  for (const auto& fair : nf.fairs) {
    bool met = false;
    for (Symbol s : l.loop)
      if (eval_single(fair, s)) {
        met = true;
        break;
      }
    if (!met) return false;
  }
  return true;
}

namespace detail {

// Per-automaton data the emptiness checks share: which SCCs satisfy every
// fairness condition of the owning spec, and which states can reach one.
struct FairReach {
  SccDecomposition sccs;
  std::vector<char> fair_complete;  // per component
  std::vector<char> good;           // per state: can reach a fair-complete SCC
};

inline FairReach analyze_fair_reach(const LabeledAutomaton& a) {
  FairReach fr;
  fr.sccs = scc(a);
  fr.fair_complete.resize(fr.sccs.components.size());
  for (std::size_t c = 0; c < fr.sccs.components.size(); ++c) {
    if (fr.sccs.trivial[c]) continue;
    bool ok = true;
    for (const auto& mask : a.fair_mask) {
      bool hit = false;
      for (std::int32_t q : fr.sccs.components[c])
        if (mask[q]) {
          hit = true;
          break;
        }
      if (!hit) {
        ok = false;
        break;
      }
    }
    fr.fair_complete[c] = ok;
  }

  // Backward sweep from fair-complete components.
  std::vector<std::vector<std::int32_t>> preds(a.labels.size());
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    for (std::int32_t t : a.succ[q]) preds[t].push_back(static_cast<std::int32_t>(q));
  fr.good.assign(a.labels.size(), 0);
  std::deque<std::int32_t> frontier;
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    if (fr.fair_complete[fr.sccs.component_of[q]]) {
      fr.good[q] = 1;
      frontier.push_back(static_cast<std::int32_t>(q));
    }
  while (!frontier.empty()) {
    std::int32_t q = frontier.front();
    frontier.pop_front();
    for (std::int32_t p : preds[q])
      if (!fr.good[p]) {
        fr.good[p] = 1;
        frontier.push_back(p);
      }
  }
  return fr;
}

// Multi-source BFS; parent[q] = -2 for sources. Returns per-state parents
// and distances (-1 when unreached). Sources are visited in index order and
// successor lists are sorted, so the tree is deterministic.
struct BfsTree {
  std::vector<std::int32_t> parent;
  std::vector<std::int32_t> dist;
};

inline BfsTree bfs_forward(const LabeledAutomaton& a, const std::vector<char>& source,
                           const std::vector<char>* allowed = nullptr) {
  BfsTree t;
  t.parent.assign(a.labels.size(), -1);
  t.dist.assign(a.labels.size(), -1);
  std::deque<std::int32_t> frontier;
  for (std::size_t q = 0; q < a.labels.size(); ++q)
    if (source[q] && (!allowed || (*allowed)[q])) {
      t.parent[q] = -2;
      t.dist[q] = 1;  // one symbol consumed to enter q from q0
      frontier.push_back(static_cast<std::int32_t>(q));
    }
  while (!frontier.empty()) {
    std::int32_t q = frontier.front();
    frontier.pop_front();
    for (std::int32_t n : a.succ[q]) {
      if (t.dist[n] != -1 || (allowed && !(*allowed)[n])) continue;
      t.dist[n] = t.dist[q] + 1;
      t.parent[n] = q;
      frontier.push_back(n);
    }
  }
  return t;
}

inline std::vector<std::int32_t> bfs_path(const BfsTree& t, std::int32_t target) {
  std::vector<std::int32_t> path;
  for (std::int32_t q = target; q != -2; q = t.parent[q]) path.push_back(q);
  std::reverse(path.begin(), path.end());
  return path;
}

// Shortest path within a state mask from `from` to `to`; empty when from ==
// to. The result excludes `from` and includes `to`.
inline std::vector<std::int32_t> path_within(const LabeledAutomaton& a,
                                             const std::vector<char>& mask, std::int32_t from,
                                             std::int32_t to) {
  if (from == to) return {};
  std::vector<std::int32_t> parent(a.labels.size(), -1);
  std::deque<std::int32_t> frontier{from};
  std::vector<char> seen(a.labels.size(), 0);
  seen[from] = 1;
  while (!frontier.empty()) {
    std::int32_t q = frontier.front();
    frontier.pop_front();
    for (std::int32_t n : a.succ[q]) {
      if (!mask[n] || seen[n]) continue;
      seen[n] = 1;
      parent[n] = q;
      if (n == to) {
        std::vector<std::int32_t> path;
        for (std::int32_t v = to; v != from; v = parent[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        return path;
      }
      frontier.push_back(n);
    }
  }
  throw contract_error("path_within called on a disconnected component");
}

// A cycle from `anchor` back to itself inside the component mask, visiting
// one state of every fairness set in declaration order. States are listed
// after the anchor, ending with the anchor itself.
inline std::vector<std::int32_t> fair_cycle(const LabeledAutomaton& a,
                                            const std::vector<char>& mask, std::int32_t anchor) {
  std::vector<std::int32_t> cycle;
  std::int32_t cur = anchor;
  for (const auto& fair : a.fair_mask) {
    std::int32_t target = -1;
    for (std::size_t q = 0; q < a.labels.size(); ++q)
      if (mask[q] && fair[q]) {
        target = static_cast<std::int32_t>(q);
        break;
      }
    // Callers guarantee each fairness set intersects the component.
    auto leg = path_within(a, mask, cur, target);
    cycle.insert(cycle.end(), leg.begin(), leg.end());
    cur = target;
  }
  if (cur != anchor) {
    auto leg = path_within(a, mask, cur, anchor);
    cycle.insert(cycle.end(), leg.begin(), leg.end());
  }
  if (cycle.empty()) {
    // No fairness condition forced us to move; take the shortest real cycle.
    std::int32_t best = -1;
    std::vector<std::int32_t> best_tail;
    for (std::int32_t n : a.succ[anchor]) {
      if (!mask[n]) continue;
      auto tail = path_within(a, mask, n, anchor);
      if (best == -1 || 1 + tail.size() < 1 + best_tail.size()) {
        best = n;
        best_tail = tail;
        if (n == anchor) break;  // self-loop, cannot do better
      }
    }
    cycle.push_back(best);
    cycle.insert(cycle.end(), best_tail.begin(), best_tail.end());
  }
  return cycle;
}

// stem(path from q0, inclusive) + cycle -> lasso in symbols, with the
// redundant tail of the stem folded into loop rotations.
inline Lasso assemble_lasso(const LabeledAutomaton& a, const std::vector<std::int32_t>& stem_states,
                            const std::vector<std::int32_t>& cycle_states) {
  Lasso l;
  for (std::int32_t q : stem_states) l.stem.push_back(a.labels[q]);
  for (std::int32_t q : cycle_states) l.loop.push_back(a.labels[q]);
  while (!l.stem.empty() && l.stem.back() == l.loop.back()) {
    l.stem.pop_back();
    std::rotate(l.loop.rbegin(), l.loop.rbegin() + 1, l.loop.rend());
  }
  return l;
}

// Mask of one component, reused for cycle construction.
inline std::vector<char> component_mask(const LabeledAutomaton& a,
                                        const std::vector<std::int32_t>& comp) {
  std::vector<char> mask(a.labels.size(), 0);
  for (std::int32_t q : comp) mask[q] = 1;
  return mask;
}

}  // namespace detail

/// Exact language-inclusion check L(phi1) subseteq L(phi2), decided by
/// checking emptiness of phi1 against each disjunct of the negation of
/// phi2: a violated initial condition, an eventually violated invariant, or
/// an eventually abandoned fairness condition. When inclusion fails, the
/// verdict carries an ultimately periodic witness.
inline InclusionVerdict implies(const Gr1Spec& phi1, const Gr1Spec& phi2, SideFilter side) {
  if (!(phi1.vars() == phi2.vars()))
    throw table_mismatch("implication requires both specs over one variable table");

  LabeledAutomaton a1 = spec_automaton(phi1, side);
  InclusionVerdict verdict;
  if (a1.empty()) return verdict;  // empty language is included in anything

  detail::FairReach fr = detail::analyze_fair_reach(a1);
  std::vector<char> initial_good(a1.labels.size(), 0);
  bool phi1_nonempty = false;
  for (std::size_t q = 0; q < a1.labels.size(); ++q) {
    initial_good[q] = a1.initial[q] && fr.good[q];
    phi1_nonempty = phi1_nonempty || initial_good[q];
  }
  if (!phi1_nonempty) return verdict;

  NormalForm nf2 = normalize(select(phi2, side));

  // Entry into a fair-complete SCC, later turned into stem + fair cycle.
  auto close_witness = [&](const detail::BfsTree& tree) -> Lasso {
    std::int32_t entry = -1;
    for (std::size_t q = 0; q < a1.labels.size(); ++q)
      if (tree.dist[q] != -1 && fr.fair_complete[fr.sccs.component_of[q]] &&
          (entry == -1 || tree.dist[q] < tree.dist[entry]))
        entry = static_cast<std::int32_t>(q);
    auto stem = detail::bfs_path(tree, entry);
    auto mask = detail::component_mask(a1, fr.sccs.components[fr.sccs.component_of[entry]]);
    auto cycle = detail::fair_cycle(a1, mask, entry);
    return detail::assemble_lasso(a1, stem, cycle);
  };

  // (a) words of phi1 whose first symbol violates phi2's initial condition.
  std::vector<char> bad_init(a1.labels.size(), 0);
  bool any_bad_init = false;
  for (std::size_t q = 0; q < a1.labels.size(); ++q) {
    bad_init[q] = initial_good[q] && !eval_single(nf2.init, a1.labels[q]);
    any_bad_init = any_bad_init || bad_init[q];
  }
  if (any_bad_init) {
    verdict.holds = false;
    verdict.witness = close_witness(detail::bfs_forward(a1, bad_init));
    return verdict;
  }

  // (b) words of phi1 containing a pair that violates phi2's invariant.
  detail::BfsTree from_init = detail::bfs_forward(a1, a1.initial);
  std::int32_t best_q = -1, best_t = -1;
  long best_cost = -1;
  std::vector<std::int32_t> dist_to_good = [&] {
    // distance (in states) from q to the nearest fair-complete SCC
    std::vector<std::int32_t> dist(a1.labels.size(), -1);
    std::vector<std::vector<std::int32_t>> preds(a1.labels.size());
    for (std::size_t q = 0; q < a1.labels.size(); ++q)
      for (std::int32_t t : a1.succ[q]) preds[t].push_back(static_cast<std::int32_t>(q));
    std::deque<std::int32_t> frontier;
    for (std::size_t q = 0; q < a1.labels.size(); ++q)
      if (fr.fair_complete[fr.sccs.component_of[q]]) {
        dist[q] = 0;
        frontier.push_back(static_cast<std::int32_t>(q));
      }
    while (!frontier.empty()) {
      std::int32_t q = frontier.front();
      frontier.pop_front();
      for (std::int32_t p : preds[q])
        if (dist[p] == -1) {
          dist[p] = dist[q] + 1;
          frontier.push_back(p);
        }
    }
    return dist;
  }();
  for (std::size_t q = 0; q < a1.labels.size(); ++q) {
    for (std::int32_t t : a1.succ[q]) {
      if (!fr.good[t]) continue;
      if (eval_pair(nf2.inv, a1.labels[q], a1.labels[t])) continue;
      long cost = from_init.dist[q] + 1 + dist_to_good[t];
      if (best_q == -1 || cost < best_cost) {
        best_q = static_cast<std::int32_t>(q);
        best_t = t;
        best_cost = cost;
      }
    }
  }
  if (best_q != -1) {
    verdict.holds = false;
    // Tail of the witness: a word starting at best_t that reaches a
    // fair-complete SCC and cycles fairly. Prepending the path to best_q
    // puts the violating pair (best_q, best_t) into the word.
    std::vector<char> start(a1.labels.size(), 0);
    start[best_t] = 1;
    Lasso tail = close_witness(detail::bfs_forward(a1, start));
    std::vector<Symbol> full;
    for (std::int32_t s : detail::bfs_path(from_init, best_q)) full.push_back(a1.labels[s]);
    full.insert(full.end(), tail.stem.begin(), tail.stem.end());
    tail.stem = std::move(full);
    while (!tail.stem.empty() && tail.stem.back() == tail.loop.back()) {
      tail.stem.pop_back();
      std::rotate(tail.loop.rbegin(), tail.loop.rbegin() + 1, tail.loop.rend());
    }
    verdict.witness = std::move(tail);
    return verdict;
  }

  // (c) words of phi1 that eventually abandon one of phi2's fairness
  // conditions: a fair-complete (for phi1) cycle inside the violating region.
  for (const auto& fair2 : nf2.fairs) {
    LabeledAutomaton region =
        restrict_to(a1, [&](Symbol s) { return !eval_single(fair2, s); });
    if (region.empty()) continue;
    SccDecomposition rs = scc(region);
    std::vector<char> candidate(a1.labels.size(), 0);
    bool found = false;
    for (std::size_t c = 0; c < rs.components.size(); ++c) {
      if (rs.trivial[c]) continue;
      bool ok = true;
      for (const auto& mask : region.fair_mask) {
        bool hit = false;
        for (std::int32_t q : rs.components[c])
          if (mask[q]) {
            hit = true;
            break;
          }
        if (!hit) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      found = true;
      for (std::int32_t q : rs.components[c])
        candidate[a1.state_of[region.labels[q].bits]] = 1;
    }
    if (!found) continue;

    verdict.holds = false;
    detail::BfsTree tree = detail::bfs_forward(a1, a1.initial);
    std::int32_t entry = -1;
    for (std::size_t q = 0; q < a1.labels.size(); ++q)
      if (candidate[q] && (entry == -1 || tree.dist[q] < tree.dist[entry]))
        entry = static_cast<std::int32_t>(q);
    auto stem = detail::bfs_path(tree, entry);
    // Cycle restricted to the entry's component inside the region.
    std::int32_t region_entry = region.state_of[a1.labels[entry].bits];
    const auto& comp = rs.components[rs.component_of[region_entry]];
    auto mask = detail::component_mask(region, comp);
    auto cycle_region = detail::fair_cycle(region, mask, region_entry);
    std::vector<std::int32_t> cycle;
    for (std::int32_t q : cycle_region) cycle.push_back(a1.state_of[region.labels[q].bits]);
    verdict.witness = detail::assemble_lasso(a1, stem, cycle);
    return verdict;
  }

  return verdict;
}

enum class StrictOrder { strict_implies, strict_implied_by, equivalent, incomparable };

inline std::string_view to_string(StrictOrder o) {
  switch (o) {
    case StrictOrder::strict_implies: return "strictly implies";
    case StrictOrder::strict_implied_by: return "strictly implied by";
    case StrictOrder::equivalent: return "equivalent";
    case StrictOrder::incomparable: return "incomparable";
  }
  return "?";
}

inline StrictOrder strict_order(const Gr1Spec& phi1, const Gr1Spec& phi2, SideFilter side) {
  bool forward = implies(phi1, phi2, side).holds;
  bool backward = implies(phi2, phi1, side).holds;
  if (forward && backward) return StrictOrder::equivalent;
  if (forward) return StrictOrder::strict_implies;
  if (backward) return StrictOrder::strict_implied_by;
  return StrictOrder::incomparable;
}

/// How often strict implication and the weakness order can separate spec
/// pairs, over all unordered pairs of the input list.
struct DiscriminationStats {
  int n_specs = 0;
  std::int64_t n_pairs = 0;
  double pct_impl = 0.0;
  double pct_weak = 0.0;
};

inline DiscriminationStats discrimination_stats(std::span<const Gr1Spec> specs, SideFilter side,
                                                double eps = 1e-6) {
  if (specs.size() < 2)
    throw contract_error("discrimination stats require at least two specs");
  for (const auto& s : specs)
    if (!(s.vars() == specs[0].vars()))
      throw table_mismatch("discrimination stats require a common variable table");

  std::vector<WeaknessPair> pairs;
  pairs.reserve(specs.size());
  for (const auto& s : specs) pairs.push_back(weakness(s, side));

  DiscriminationStats stats;
  stats.n_specs = static_cast<int>(specs.size());
  stats.n_pairs = static_cast<std::int64_t>(specs.size()) * (specs.size() - 1) / 2;
  std::int64_t impl_count = 0, weak_count = 0;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      StrictOrder o = strict_order(specs[i], specs[j], side);
      if (o == StrictOrder::strict_implies || o == StrictOrder::strict_implied_by) ++impl_count;
      if (compare_weakness(pairs[i], pairs[j], eps) != WeaknessOrder::equal) ++weak_count;
    }
  }
  stats.pct_impl = 100.0 * static_cast<double>(impl_count) / static_cast<double>(stats.n_pairs);
  stats.pct_weak = 100.0 * static_cast<double>(weak_count) / static_cast<double>(stats.n_pairs);
  return stats;
}

}  // namespace gr1w
