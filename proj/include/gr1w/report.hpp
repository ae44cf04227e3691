#pragma once

#include <chrono>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "gr1w/dimension.hpp"
#include "gr1w/implication.hpp"
#include "gr1w/spec.hpp"
#include "gr1w/version.hpp"

namespace gr1w {

/// Weakness and automaton statistics for one analyzed spec.
struct SpecAnalysis {
  std::string name;
  WeaknessPair weakness;
  std::size_t states = 0;
  std::size_t edges = 0;
  std::size_t sccs = 0;
  double wall_ms = 0.0;  // shown in tables only; JSON output is reproducible
};

inline SpecAnalysis analyze_spec(const Gr1Spec& spec, SideFilter side, std::string name) {
  auto start = std::chrono::steady_clock::now();
  SpecAnalysis out;
  out.name = std::move(name);
  NormalForm nf = normalize(select(spec, side));
  LabeledAutomaton a = spec_automaton(spec, side);
  out.states = a.state_count();
  out.edges = a.edge_count();
  out.sccs = scc(a).components.size();
  out.weakness.fairness_count = static_cast<int>(nf.fairs.size());
  DimResult r1 = detail::d1_of_automaton(a);
  if (r1.empty) {
    out.weakness.empty = true;
  } else {
    out.weakness.d1 = r1.value;
    for (const auto& f : nf.fairs)
      out.weakness.d2 = std::max(out.weakness.d2, detail::d2_of_automaton(a, f));
  }
  out.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                    .count();
  return out;
}

/// One rank entry; entries sharing `group` are equal under the order.
struct RankEntry {
  std::size_t input_index = 0;
  std::string name;
  WeaknessPair weakness;
  int group = 0;
};

struct Report {
  std::string command;
  std::string side;
  double tolerance = 1e-6;
  std::vector<SpecAnalysis> specs;

  std::optional<WeaknessOrder> order;             // compare
  std::optional<bool> a_implies_b, b_implies_a;   // implies
  std::optional<std::string> witness_a_not_b;     // rendered lassos
  std::optional<std::string> witness_b_not_a;
  std::vector<RankEntry> ranking;                 // rank, weakest first
  std::optional<DiscriminationStats> stats;
};

inline std::string render_lasso(const Lasso& l, const VarTable& vars) {
  std::string out;
  for (Symbol s : l.stem) out += to_string(s, vars) + " ";
  out += "(";
  for (std::size_t i = 0; i < l.loop.size(); ++i) {
    if (i) out += " ";
    out += to_string(l.loop[i], vars);
  }
  return out + ")^w";
}

namespace detail {

inline std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_f4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

inline std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

inline std::string json_spec(const SpecAnalysis& s, const std::string& indent) {
  std::string out = indent + "{\n";
  out += indent + "  \"file\": \"" + json_escape(s.name) + "\",\n";
  out += indent + "  \"d1\": " + fmt_g12(s.weakness.d1) + ",\n";
  out += indent + "  \"d2\": " + fmt_g12(s.weakness.d2) + ",\n";
  out += indent + "  \"empty\": " + (s.weakness.empty ? "true" : "false") + ",\n";
  out += indent + "  \"fairness_count\": " + std::to_string(s.weakness.fairness_count) + ",\n";
  out += indent + "  \"states\": " + std::to_string(s.states) + ",\n";
  out += indent + "  \"edges\": " + std::to_string(s.edges) + ",\n";
  out += indent + "  \"sccs\": " + std::to_string(s.sccs) + "\n";
  return out + indent + "}";
}

}  // namespace detail

/// Machine-readable rendering. Byte-identical for identical inputs and
/// flags: numbers are printed with 12 significant digits and no timing
/// information is included.
inline std::string to_json(const Report& r) {
  using detail::fmt_g12;
  using detail::json_escape;
  std::string out = "{\n";
  out += "  \"command\": \"" + json_escape(r.command) + "\",\n";
  out += "  \"version\": \"" + std::string(version) + "\",\n";
  out += "  \"side\": \"" + r.side + "\",\n";
  out += "  \"tolerance\": " + fmt_g12(r.tolerance);
  if (!r.specs.empty()) {
    out += ",\n  \"specs\": [\n";
    for (std::size_t i = 0; i < r.specs.size(); ++i) {
      out += detail::json_spec(r.specs[i], "    ");
      out += (i + 1 < r.specs.size()) ? ",\n" : "\n";
    }
    out += "  ]";
  }
  if (r.order) out += ",\n  \"order\": \"" + std::string(to_string(*r.order)) + "\"";
  if (r.a_implies_b) out += ",\n  \"a_implies_b\": " + std::string(*r.a_implies_b ? "true" : "false");
  if (r.b_implies_a) out += ",\n  \"b_implies_a\": " + std::string(*r.b_implies_a ? "true" : "false");
  if (r.witness_a_not_b)
    out += ",\n  \"witness_a_not_b\": \"" + json_escape(*r.witness_a_not_b) + "\"";
  if (r.witness_b_not_a)
    out += ",\n  \"witness_b_not_a\": \"" + json_escape(*r.witness_b_not_a) + "\"";
  if (!r.ranking.empty()) {
    out += ",\n  \"ranking\": [\n";
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      const RankEntry& e = r.ranking[i];
      out += "    {\"rank\": " + std::to_string(e.group + 1) + ", \"file\": \"" +
             json_escape(e.name) + "\", \"d1\": " + fmt_g12(e.weakness.d1) +
             ", \"d2\": " + fmt_g12(e.weakness.d2) +
             ", \"empty\": " + (e.weakness.empty ? "true" : "false") + "}";
      out += (i + 1 < r.ranking.size()) ? ",\n" : "\n";
    }
    out += "  ]";
  }
  if (r.stats) {
    out += ",\n  \"n_specs\": " + std::to_string(r.stats->n_specs);
    out += ",\n  \"n_pairs\": " + std::to_string(r.stats->n_pairs);
    out += ",\n  \"pct_impl\": " + fmt_g12(r.stats->pct_impl);
    out += ",\n  \"pct_weak\": " + fmt_g12(r.stats->pct_weak);
  }
  return out + "\n}\n";
}

/// Human-readable rendering: 4 decimals plus wall-clock times.
inline std::string to_table(const Report& r) {
  using detail::fmt_f4;
  std::string out;
  out += "gr1w " + std::string(version) + "  |  " + r.command + "  |  side=" + r.side + "\n";
  if (!r.specs.empty()) {
    out += "\n  spec                                  d1      d2      empty  m  states  edges   sccs  ms\n";
    for (const auto& s : r.specs) {
      char line[256];
      std::snprintf(line, sizeof line, "  %-36s %7s %7s  %-5s %2d %7zu %7zu %5zu  %.1f\n",
                    s.name.c_str(), fmt_f4(s.weakness.d1).c_str(), fmt_f4(s.weakness.d2).c_str(),
                    s.weakness.empty ? "yes" : "no", s.weakness.fairness_count, s.states, s.edges,
                    s.sccs, s.wall_ms);
      out += line;
    }
  }
  if (r.order) {
    switch (*r.order) {
      case WeaknessOrder::strictly_weaker: out += "\nfirst is strictly weaker (allows more)\n"; break;
      case WeaknessOrder::strictly_stronger: out += "\nfirst is strictly stronger (allows less)\n"; break;
      case WeaknessOrder::equal: out += "\nequal weakness\n"; break;
      case WeaknessOrder::incomparable: out += "\nincomparable\n"; break;
    }
  }
  if (r.a_implies_b) out += std::string("\nA implies B: ") + (*r.a_implies_b ? "yes" : "no") + "\n";
  if (r.b_implies_a) out += std::string("B implies A: ") + (*r.b_implies_a ? "yes" : "no") + "\n";
  if (r.witness_a_not_b) out += "witness in L(A) \\ L(B): " + *r.witness_a_not_b + "\n";
  if (r.witness_b_not_a) out += "witness in L(B) \\ L(A): " + *r.witness_b_not_a + "\n";
  if (!r.ranking.empty()) {
    out += "\n  rank  spec                                  d1      d2      note\n";
    for (std::size_t i = 0; i < r.ranking.size(); ++i) {
      const RankEntry& e = r.ranking[i];
      bool tied = i > 0 && r.ranking[i - 1].group == e.group;
      char line[256];
      std::snprintf(line, sizeof line, "  %4d  %-36s %7s %7s  %s\n", e.group + 1, e.name.c_str(),
                    fmt_f4(e.weakness.d1).c_str(), fmt_f4(e.weakness.d2).c_str(),
                    e.weakness.empty ? "empty language" : (tied ? "equal to previous" : ""));
      out += line;
    }
  }
  if (r.stats) {
    char line[160];
    std::snprintf(line, sizeof line,
                  "\n  specs: %d  pairs: %lld  impl-discriminated: %.1f%%  weak-discriminated: %.1f%%\n",
                  r.stats->n_specs, static_cast<long long>(r.stats->n_pairs), r.stats->pct_impl,
                  r.stats->pct_weak);
    out += line;
  }
  return out;
}

/// Ranking weakest-first with ties grouped; ties keep input order.
inline std::vector<RankEntry> rank_weakest_first(std::vector<RankEntry> entries, double eps) {
  std::stable_sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.weakness.empty != b.weakness.empty) return !a.weakness.empty;  // empties last
    if (a.weakness.d1 != b.weakness.d1) return a.weakness.d1 > b.weakness.d1;
    if (a.weakness.d2 != b.weakness.d2) return a.weakness.d2 < b.weakness.d2;
    return a.input_index < b.input_index;
  });
  // Group the eps-equal runs, then restore input order inside each group.
  int group = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0 &&
        compare_weakness(entries[i - 1].weakness, entries[i].weakness, eps) != WeaknessOrder::equal)
      ++group;
    entries[i].group = group;
  }
  std::stable_sort(entries.begin(), entries.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.group != b.group) return a.group < b.group;
    return a.input_index < b.input_index;
  });
  return entries;
}

}  // namespace gr1w
