#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subcomp/chain.hpp"
#include "subcomp/dist.hpp"
#include "subcomp/io.hpp"
#include "subcomp/rates.hpp"
#include "subcomp/sim.hpp"
#include "subcomp/subspace.hpp"

namespace {

using namespace subcomp;

struct CommonArgs {
  std::string family;
  std::string input;
  std::vector<std::string> target;
  std::string format = "text";
  std::string out;
  double tolerance = 1e-9;
};

void add_dist_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--family", a.family,
                  "inline family, e.g. example1:p1=0.1,p2=0.2 (see 'families --list')");
  cmd->add_option("--input", a.input, "distribution document path (JSON)");
}

void add_output_options(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--format", a.format, "output format: text or csv")
      ->check(CLI::IsMember({"text", "csv"}));
  cmd->add_option("--out", a.out, "write output to this file instead of stdout");
}

JointDist resolve_dist(const CommonArgs& a) {
  if (a.family.empty() == a.input.empty())
    throw std::invalid_argument("give exactly one of --family or --input");
  if (!a.family.empty()) return make_family(parse_family(a.family));
  return load_distribution(a.input);
}

Subspace parse_subspace(const std::vector<std::string>& args, const JointDist& d) {
  const auto cols = parse_columns(args, d.field(), d.source_count());
  return Subspace::span(d.field(), d.source_count(), cols);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file '" + out_path + "'");
  f << text;
}

int run_analyze(const CommonArgs& a) {
  const JointDist d = resolve_dist(a);
  if (a.target.empty()) throw std::invalid_argument("analyze needs at least one --target column");
  const TargetSpec target =
      TargetSpec::from_columns(d, parse_columns(a.target, d.field(), d.source_count()));
  ChainOptions opts;
  opts.tol = a.tolerance;
  RateAnalyzer analyzer(d, opts);
  const RateReport report = analyzer.rate_report(target);
  std::string text;
  if (a.format == "csv") {
    text = render_chain_csv(analyzer.chain()) + "\n" + render_report_csv(report);
  } else {
    text = render_chain_text(analyzer.chain()) + "target subspace " + format_subspace(target.w) +
           "\n" + render_report_text(report);
  }
  emit(text, a.out);
  return 0;
}

int run_chain(const CommonArgs& a) {
  const JointDist d = resolve_dist(a);
  ChainOptions opts;
  opts.tol = a.tolerance;
  const SubspaceChain chain = decompose(d, opts);
  emit(a.format == "csv" ? render_chain_csv(chain) : render_chain_text(chain), a.out);
  return 0;
}

struct SimArgs {
  CommonArgs common;
  std::string scheme = "cc";
  std::vector<std::string> side;
  SimConfig cfg;
  std::optional<int> k;
  std::optional<double> rate;
  std::vector<double> stage_rates;
  std::string matrix_mode = "redraw";
};

void apply_sim_config(SimArgs& s) {
  if (s.k) s.cfg.k = *s.k;
  if (s.rate) s.cfg.rate_bits = *s.rate;
  s.cfg.stage_rates_bits = s.stage_rates;
  s.cfg.matrix_mode =
      s.matrix_mode == "fixed" ? MatrixMode::FixedPerRun : MatrixMode::RedrawPerTrial;
}

int run_simulate(SimArgs& s) {
  const CommonArgs& a = s.common;
  const JointDist d = resolve_dist(a);
  if (a.target.empty()) throw std::invalid_argument("simulate needs at least one --target column");
  const Subspace w = parse_subspace(a.target, d);
  apply_sim_config(s);
  std::string text;
  if (s.scheme == "cc") {
    const SimResult r = simulate_cc(d, w, s.cfg);
    text = a.format == "csv" ? render_sim_csv(r, "cc") : render_sim_text(r, "cc");
  } else if (s.scheme == "cc_side") {
    if (s.side.empty())
      throw std::invalid_argument("scheme cc_side needs --side basis rows for S");
    const Subspace side = parse_subspace(s.side, d);
    const SimResult r = simulate_cc_side_info(d, w, side, s.cfg);
    text = a.format == "csv" ? render_sim_csv(r, "cc_side") : render_sim_text(r, "cc_side");
  } else if (s.scheme == "nested") {
    ChainOptions copts;
    copts.tol = a.tolerance;
    const NestedSimResult r = simulate_nested(d, w, s.cfg, copts);
    text = a.format == "csv" ? render_nested_csv(r) : render_nested_text(r);
  } else {
    throw std::invalid_argument("unknown scheme '" + s.scheme + "' (cc, cc_side, nested)");
  }
  emit(text, a.out);
  return 0;
}

struct SweepArgs {
  CommonArgs common;
  std::string scheme = "cc";
  std::vector<int> n_list;
  std::vector<double> rates;
  SimConfig cfg;
  std::string matrix_mode = "redraw";
};

int run_sweep(SweepArgs& s) {
  const CommonArgs& a = s.common;
  const JointDist d = resolve_dist(a);
  if (a.target.empty()) throw std::invalid_argument("sweep needs at least one --target column");
  const Subspace w = parse_subspace(a.target, d);
  s.cfg.matrix_mode =
      s.matrix_mode == "fixed" ? MatrixMode::FixedPerRun : MatrixMode::RedrawPerTrial;
  const SweepTable table = rate_sweep(d, w, s.scheme, s.n_list, s.rates, s.cfg);
  std::string text = sweep_csv(table);
  if (a.format == "text")
    text += "monotone_fraction " + format_value(table.monotone_fraction) + "\n";
  emit(text, a.out);
  return 0;
}

int run_families(const CommonArgs& a, bool list, bool do_emit) {
  if (list) {
    std::string text;
    text += "example1:p1=<p>,p2=<p>          q=2, m=4; two sparse components, one crossover pair\n";
    text += "opt_ss:m=<even>,p=<p>           q=2; cumulative sums of alternating fair/biased bits\n";
    text += "uniform:q=<prime>,m=<count>     uniform joint law\n";
    text += "random:q=<prime>,m=<count>,seed=<u64>[,smoothing=<eps>]  seeded strictly positive pmf\n";
    text += "independent_mix                 file-only: {\"name\":\"independent_mix\",\"g\":[[..]],"
            "\"marginals\":[[..]]}\n";
    emit(text, a.out);
    return 0;
  }
  if (!do_emit) throw std::invalid_argument("families needs --list or --emit");
  const JointDist d = resolve_dist(a);
  emit(distribution_to_json_text(d) + "\n", a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"subspace computation rate analysis and random-code simulation"};
  app.require_subcommand(1);

  CommonArgs an, ch, fa;
  SimArgs si;
  SweepArgs sw;
  bool fam_list = false, fam_emit = false;

  CLI::App* analyze = app.add_subcommand("analyze", "chain, per-scheme sum rates, and verdicts");
  add_dist_options(analyze, an);
  analyze->add_option("--target", an.target, "demanded combination, one column per flag or ';'-joined");
  analyze->add_option("--tolerance", an.tolerance, "entropy tie tolerance in bits");
  add_output_options(analyze, an);

  CLI::App* chain_cmd = app.add_subcommand("chain", "normalized-entropy subspace chain only");
  add_dist_options(chain_cmd, ch);
  chain_cmd->add_option("--tolerance", ch.tolerance, "entropy tie tolerance in bits");
  add_output_options(chain_cmd, ch);

  CLI::App* simulate = app.add_subcommand("simulate", "Monte Carlo run of one scheme");
  add_dist_options(simulate, si.common);
  simulate->add_option("--target", si.common.target, "target subspace basis columns");
  simulate->add_option("--scheme", si.scheme, "cc, cc_side, or nested");
  simulate->add_option("--side", si.side, "side-information subspace rows (cc_side)");
  simulate->add_option("--n", si.cfg.n, "blocklength");
  simulate->add_option("--k", si.k, "encoder rows (overrides --rate)");
  simulate->add_option("--rate", si.rate, "per-encoder rate in bits");
  simulate->add_option("--stage-rate", si.stage_rates, "nested: per-stage rate in bits (repeat)");
  simulate->add_option("--rate-scale", si.cfg.stage_rate_scale,
                       "nested: scale on the analytic stage rates when --stage-rate is absent");
  simulate->add_option("--trials", si.cfg.trials, "Monte Carlo trials");
  simulate->add_option("--seed", si.cfg.seed, "RNG seed");
  simulate->add_option("--budget", si.cfg.decoder_budget, "max enumerated coset size");
  simulate->add_option("--matrix-mode", si.matrix_mode, "redraw (per trial) or fixed (per run)")
      ->check(CLI::IsMember({"redraw", "fixed"}));
  simulate->add_option("--tolerance", si.common.tolerance, "entropy tie tolerance (nested chain)");
  add_output_options(simulate, si.common);

  CLI::App* sweep = app.add_subcommand("sweep", "rate grid of cc runs, CSV output");
  add_dist_options(sweep, sw.common);
  sweep->add_option("--target", sw.common.target, "target subspace basis columns");
  sweep->add_option("--scheme", sw.scheme, "sweep scheme (cc)");
  sweep->add_option("--n", sw.n_list, "blocklength (repeat for several)")->required();
  sweep->add_option("--rate", sw.rates, "per-encoder rate in bits (repeat for a grid)")->required();
  sweep->add_option("--trials", sw.cfg.trials, "Monte Carlo trials per cell");
  sweep->add_option("--seed", sw.cfg.seed, "RNG seed");
  sweep->add_option("--budget", sw.cfg.decoder_budget, "max enumerated coset size");
  sweep->add_option("--matrix-mode", sw.matrix_mode, "redraw (per trial) or fixed (per run)")
      ->check(CLI::IsMember({"redraw", "fixed"}));
  add_output_options(sweep, sw.common);

  CLI::App* families = app.add_subcommand("families", "list family syntax or emit a document");
  add_dist_options(families, fa);
  families->add_flag("--list", fam_list, "print the known inline family syntaxes");
  families->add_flag("--emit", fam_emit, "resolve the distribution and print it as a document");
  add_output_options(families, fa);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed()) return run_analyze(an);
    if (chain_cmd->parsed()) return run_chain(ch);
    if (simulate->parsed()) return run_simulate(si);
    if (sweep->parsed()) return run_sweep(sw);
    if (families->parsed()) return run_families(fa, fam_list, fam_emit);
    throw std::invalid_argument("no subcommand given");
  } catch (const budget_error& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return 3;
  } catch (const consistency_error& e) {
    std::cerr << "internal consistency error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
