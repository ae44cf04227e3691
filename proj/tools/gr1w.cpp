// gr1w - weakness measurement, comparison, ranking and implication checking
// for GR(1) specifications.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gr1w/dimension.hpp"
#include "gr1w/implication.hpp"
#include "gr1w/report.hpp"
#include "gr1w/spec.hpp"

namespace {

struct CommonOpts {
  std::string side = "env";
  double tolerance = 1e-6;
  int max_vars = gr1w::VarTable::default_max_vars;
  std::string format = "table";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--side", opts.side, "Units to measure: env, sys or all")
      ->check(CLI::IsMember({"env", "sys", "all"}))
      ->capture_default_str();
  cmd->add_option("--tolerance", opts.tolerance, "Comparison tolerance")->capture_default_str();
  cmd->add_option("--max-vars", opts.max_vars, "Variable cap for parsed specs")
      ->capture_default_str();
  cmd->add_option("--format", opts.format, "Output format: table or json")
      ->check(CLI::IsMember({"table", "json"}))
      ->capture_default_str();
}

gr1w::SideFilter side_filter(const std::string& s) {
  if (s == "env") return gr1w::SideFilter::env_only;
  if (s == "sys") return gr1w::SideFilter::sys_only;
  return gr1w::SideFilter::all;
}

gr1w::Gr1Spec load_spec(const std::string& path, int max_vars) {
  std::ifstream in(path);
  if (!in) throw gr1w::parse_error(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return gr1w::parse_spec(buf.str(), max_vars);
  } catch (const gr1w::parse_error& e) {
    throw gr1w::parse_error(path + ": " + e.what(), e.line, e.column);
  }
}

void emit(const gr1w::Report& report, const CommonOpts& opts) {
  std::cout << (opts.format == "json" ? gr1w::to_json(report) : gr1w::to_table(report));
}

gr1w::Report base_report(const std::string& command, const CommonOpts& opts) {
  gr1w::Report r;
  r.command = command;
  r.side = opts.side;
  r.tolerance = opts.tolerance;
  return r;
}

int run(int argc, char** argv) {
  CLI::App app{"Weakness measures for GR(1) specifications"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string file_a, file_b;
  std::vector<std::string> files;
  bool want_witness = false;

  CLI::App* weakness_cmd = app.add_subcommand("weakness", "Weakness pair of one spec");
  weakness_cmd->add_option("file", file_a, "Spec file")->required();
  add_common(weakness_cmd, opts);

  CLI::App* compare_cmd = app.add_subcommand("compare", "Order two specs by weakness");
  compare_cmd->add_option("fileA", file_a)->required();
  compare_cmd->add_option("fileB", file_b)->required();
  add_common(compare_cmd, opts);

  CLI::App* implies_cmd = app.add_subcommand("implies", "Language inclusion in both directions");
  implies_cmd->add_option("fileA", file_a)->required();
  implies_cmd->add_option("fileB", file_b)->required();
  implies_cmd->add_flag("--witness", want_witness, "Print counterexample lassos");
  add_common(implies_cmd, opts);

  CLI::App* rank_cmd = app.add_subcommand("rank", "Rank refinements of a base spec, weakest first");
  rank_cmd->add_option("base", file_a, "Base spec file")->required();
  rank_cmd->add_option("refinements", files, "Refinement spec files")->required()->expected(-1);
  add_common(rank_cmd, opts);

  CLI::App* stats_cmd = app.add_subcommand("stats", "Discrimination statistics over a spec list");
  stats_cmd->add_option("files", files, "Spec files")->required()->expected(-2);
  add_common(stats_cmd, opts);

  CLI11_PARSE(app, argc, argv);
  const gr1w::SideFilter side = side_filter(opts.side);

  if (weakness_cmd->parsed()) {
    gr1w::Report r = base_report("weakness", opts);
    r.specs.push_back(gr1w::analyze_spec(load_spec(file_a, opts.max_vars), side, file_a));
    emit(r, opts);
    return 0;
  }

  if (compare_cmd->parsed()) {
    gr1w::Gr1Spec a = load_spec(file_a, opts.max_vars);
    gr1w::Gr1Spec b = load_spec(file_b, opts.max_vars);
    if (!(a.vars() == b.vars()))
      throw gr1w::table_mismatch(file_a + " and " + file_b + " declare different variables");
    gr1w::Report r = base_report("compare", opts);
    r.specs.push_back(gr1w::analyze_spec(a, side, file_a));
    r.specs.push_back(gr1w::analyze_spec(b, side, file_b));
    r.order = gr1w::compare_weakness(r.specs[0].weakness, r.specs[1].weakness, opts.tolerance);
    emit(r, opts);
    return 0;
  }

  if (implies_cmd->parsed()) {
    gr1w::Gr1Spec a = load_spec(file_a, opts.max_vars);
    gr1w::Gr1Spec b = load_spec(file_b, opts.max_vars);
    gr1w::Report r = base_report("implies", opts);
    gr1w::InclusionVerdict ab = gr1w::implies(a, b, side);
    gr1w::InclusionVerdict ba = gr1w::implies(b, a, side);
    r.a_implies_b = ab.holds;
    r.b_implies_a = ba.holds;
    if (want_witness && ab.witness) r.witness_a_not_b = gr1w::render_lasso(*ab.witness, a.vars());
    if (want_witness && ba.witness) r.witness_b_not_a = gr1w::render_lasso(*ba.witness, a.vars());
    emit(r, opts);
    return 0;
  }

  if (rank_cmd->parsed()) {
    gr1w::Gr1Spec base = load_spec(file_a, opts.max_vars);
    gr1w::Report r = base_report("rank", opts);
    r.specs.push_back(gr1w::analyze_spec(base, side, file_a));
    std::vector<gr1w::RankEntry> entries;
    for (std::size_t i = 0; i < files.size(); ++i) {
      gr1w::Gr1Spec refined = gr1w::conjoin(base, load_spec(files[i], opts.max_vars));
      gr1w::RankEntry e;
      e.input_index = i;
      e.name = files[i];
      e.weakness = gr1w::weakness(refined, side);
      entries.push_back(std::move(e));
    }
    r.ranking = gr1w::rank_weakest_first(std::move(entries), opts.tolerance);
    emit(r, opts);
    return 0;
  }

  if (stats_cmd->parsed()) {
    std::vector<gr1w::Gr1Spec> specs;
    gr1w::Report r = base_report("stats", opts);
    for (const auto& f : files) {
      specs.push_back(load_spec(f, opts.max_vars));
      r.specs.push_back(gr1w::analyze_spec(specs.back(), side, f));
    }
    r.stats = gr1w::discrimination_stats(specs, side, opts.tolerance);
    emit(r, opts);
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gr1w::cap_exceeded& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gr1w::table_mismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const gr1w::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
