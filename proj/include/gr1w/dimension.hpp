#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "gr1w/automaton.hpp"
#include "gr1w/errors.hpp"
#include "gr1w/spec.hpp"

namespace gr1w {

/// Row-major sparse nonnegative integer matrix.
struct SparseMatrix {
  std::int32_t n = 0;
  std::vector<std::vector<std::pair<std::int32_t, std::int64_t>>> rows;  // (col, weight)
};

namespace detail {

inline long max_power_iterations() {
  if (const char* env = std::getenv("GR1W_MAX_ITERS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end && *end == '\0' && v > 0) return v;
  }
  return 100000;
}

}  // namespace detail

/// Perron root of the adjacency matrix of a non-trivial SCC, to 1e-12
/// relative accuracy. Power iteration runs on A + I so that periodic
/// components still converge, with a deterministic all-ones start; the
/// Collatz-Wielandt ratio bounds certify the enclosure.
inline double spectral_radius(const SparseMatrix& m) {
  if (m.n <= 0) return 0.0;
  const long max_iters = detail::max_power_iterations();
  const double tol = 1e-12;

  std::vector<double> x(static_cast<std::size_t>(m.n), 1.0);
  std::vector<double> y(static_cast<std::size_t>(m.n));
  double lo = 0.0, hi = 0.0;
  for (long iter = 0; iter < max_iters; ++iter) {
    double ymax = 0.0;
    for (std::int32_t i = 0; i < m.n; ++i) {
      double acc = x[i];  // the implicit identity shift
      for (auto [j, w] : m.rows[i]) acc += static_cast<double>(w) * x[j];
      y[i] = acc;
      if (acc > ymax) ymax = acc;
    }
    lo = y[0] / x[0];
    hi = lo;
    for (std::int32_t i = 1; i < m.n; ++i) {
      double ratio = y[i] / x[i];
      if (ratio < lo) lo = ratio;
      if (ratio > hi) hi = ratio;
    }
    if (hi - lo <= tol * std::max(1.0, lo - 1.0)) return 0.5 * (lo + hi) - 1.0;
    for (std::int32_t i = 0; i < m.n; ++i) x[i] = y[i] / ymax;
  }
  throw convergence_error("power iteration did not converge within " +
                              std::to_string(max_iters) + " iterations (residual " +
                              std::to_string(hi - lo) + ")",
                          hi - lo);
}

/// Adjacency matrix of the subgraph induced by one component. Labels are
/// unique per state, so every edge has weight 1.
inline SparseMatrix component_matrix(const LabeledAutomaton& a,
                                     const std::vector<std::int32_t>& component) {
  SparseMatrix m;
  m.n = static_cast<std::int32_t>(component.size());
  m.rows.resize(component.size());
  std::vector<std::int32_t> local(a.labels.size(), -1);
  for (std::size_t i = 0; i < component.size(); ++i) local[component[i]] = static_cast<std::int32_t>(i);
  for (std::size_t i = 0; i < component.size(); ++i)
    for (std::int32_t t : a.succ[component[i]])
      if (local[t] >= 0) m.rows[i].emplace_back(local[t], 1);
  return m;
}

/// Entropy value in [0, 1] together with the logarithm base it was taken in.
struct Entropy {
  double value = 0.0;
  std::uint32_t log_base = 2;
  bool empty = true;
};

/// A dimension value with an explicit marker for the empty language.
struct DimResult {
  double value = 0.0;
  bool empty = true;
};

namespace detail {

inline double log_alphabet(double rho, int var_count) {
  return std::log2(rho) / var_count;
}

// Shared kernel of the dimension computations: the largest per-SCC entropy,
// filtered by reachability and by intersection with every fairness set.
inline DimResult max_scc_entropy(const LabeledAutomaton& a, bool require_reachable,
                                 bool require_fair) {
  DimResult result;
  if (a.empty()) return result;
  SccDecomposition d = scc(a);
  for (std::size_t c = 0; c < d.components.size(); ++c) {
    if (d.trivial[c]) continue;
    if (require_reachable && !d.reachable[c]) continue;
    if (require_fair) {
      bool hits_all = true;
      for (const auto& mask : a.fair_mask) {
        bool hit = false;
        for (std::int32_t q : d.components[c])
          if (mask[q]) {
            hit = true;
            break;
          }
        if (!hit) {
          hits_all = false;
          break;
        }
      }
      if (!hits_all) continue;
    }
    double rho = spectral_radius(component_matrix(a, d.components[c]));
    double value = log_alphabet(rho, a.var_count);
    if (result.empty || value > result.value) {
      result.value = value;
      result.empty = false;
    }
  }
  return result;
}

}  // namespace detail

/// Entropy of the closed language of a pruned automaton read with every
/// state accepting: log_r of the largest spectral radius over reachable
/// non-trivial SCCs.
inline Entropy entropy_closed(const LabeledAutomaton& a) {
  DimResult r = detail::max_scc_entropy(a, /*require_reachable=*/true, /*require_fair=*/false);
  return Entropy{r.empty ? 0.0 : r.value, a.alphabet_size, r.empty};
}

/// The invariant automaton of a spec with initial conditions applied and
/// dead branches pruned; fairness expressions ride along as state sets.
inline LabeledAutomaton spec_automaton(const Gr1Spec& spec, SideFilter side) {
  if (spec.vars().size() == 0)
    throw contract_error("specification declares no variables");
  NormalForm nf = normalize(select(spec, side));
  LabeledAutomaton a = build_invariant_automaton(spec.vars(), nf.inv, nf.fairs);
  a = apply_init(a, nf.init);
  return prune(a);
}

namespace detail {

// d1 on a prepared automaton: the maximal accepting sets of the Muller view
// are whole reachable SCCs meeting every fairness set, so only those are
// scanned.
inline DimResult d1_of_automaton(const LabeledAutomaton& a) {
  return max_scc_entropy(a, /*require_reachable=*/true, /*require_fair=*/true);
}

// d2 contribution of one fairness condition: the closed language of the
// invariant conjoined with the condition's negation, i.e. the subgraph of
// states violating it, re-pruned so that only region states on an infinite
// path from a region-and-initial symbol survive.
inline double d2_of_automaton(const LabeledAutomaton& a, const BoolExpr& fair) {
  LabeledAutomaton region =
      prune(restrict_to(a, [&](Symbol s) { return !eval_single(fair, s); }));
  Entropy e = entropy_closed(region);
  return e.empty ? 0.0 : e.value;
}

}  // namespace detail

/// Hausdorff dimension of the spec's language.
inline DimResult d1(const Gr1Spec& spec, SideFilter side) {
  return detail::d1_of_automaton(spec_automaton(spec, side));
}

/// Hausdorff dimension of the language the fairness conditions remove: the
/// largest dimension over the per-condition complements, 0 when there is no
/// fairness condition.
inline double d2(const Gr1Spec& spec, SideFilter side) {
  NormalForm nf = normalize(select(spec, side));
  if (nf.fairs.empty()) return 0.0;
  LabeledAutomaton a = spec_automaton(spec, side);
  double best = 0.0;
  for (const auto& f : nf.fairs) best = std::max(best, detail::d2_of_automaton(a, f));
  return best;
}

/// The weakness pair (d1, d2) with the partial order of compare_weakness.
struct WeaknessPair {
  double d1 = 0.0;
  double d2 = 0.0;
  bool empty = false;        // the spec's language is empty
  int fairness_count = 0;    // number of fairness conditions feeding d2
};

inline WeaknessPair weakness(const Gr1Spec& spec, SideFilter side) {
  NormalForm nf = normalize(select(spec, side));
  LabeledAutomaton a = spec_automaton(spec, side);
  WeaknessPair w;
  w.fairness_count = static_cast<int>(nf.fairs.size());
  DimResult r1 = detail::d1_of_automaton(a);
  if (r1.empty) {
    w.empty = true;
    return w;
  }
  w.d1 = r1.value;
  for (const auto& f : nf.fairs) w.d2 = std::max(w.d2, detail::d2_of_automaton(a, f));
  return w;
}

/// Closed form for a next-free invariant G B: log_r of the number of
/// satisfying valuations.
inline DimResult one_state_dim(const BoolExpr& b, const VarTable& vars) {
  if (b.uses_next())
    throw contract_error("one_state_dim requires a next-free expression");
  std::uint64_t count = count_sat_single(b, vars);
  if (count == 0) return DimResult{0.0, true};
  return DimResult{detail::log_alphabet(static_cast<double>(count), vars.size()), false};
}

enum class WeaknessOrder {
  strictly_weaker,    // first allows more behaviour than second
  strictly_stronger,  // first allows less behaviour than second
  equal,
  incomparable,       // NaN or empty-flag mismatch
};

inline std::string_view to_string(WeaknessOrder o) {
  switch (o) {
    case WeaknessOrder::strictly_weaker: return "weaker";
    case WeaknessOrder::strictly_stronger: return "stronger";
    case WeaknessOrder::equal: return "equal";
    case WeaknessOrder::incomparable: return "incomparable";
  }
  return "?";
}

/// Orders two weakness pairs: higher d1 is weaker; on equal d1, lower d2 is
/// weaker. Component equality is tested within eps.
inline WeaknessOrder compare_weakness(const WeaknessPair& p, const WeaknessPair& q,
                                      double eps = 1e-6) {
  if (std::isnan(p.d1) || std::isnan(p.d2) || std::isnan(q.d1) || std::isnan(q.d2))
    return WeaknessOrder::incomparable;
  if (p.empty != q.empty) return WeaknessOrder::incomparable;
  if (p.empty && q.empty) return WeaknessOrder::equal;
  if (std::abs(p.d1 - q.d1) > eps)
    return p.d1 > q.d1 ? WeaknessOrder::strictly_weaker : WeaknessOrder::strictly_stronger;
  if (std::abs(p.d2 - q.d2) > eps)
    return p.d2 < q.d2 ? WeaknessOrder::strictly_weaker : WeaknessOrder::strictly_stronger;
  return WeaknessOrder::equal;
}

}  // namespace gr1w
