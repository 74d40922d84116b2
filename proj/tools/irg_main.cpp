// Command-line front end: sampling, condition checks, path search,
// matching, bound tables, channel assignment, experiment sweeps, plots.
//
// Exit codes: 0 success, 2 configuration error, 3 runtime failure.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "irg/bounds.hpp"
#include "irg/channel.hpp"
#include "irg/hamilton.hpp"
#include "irg/harness.hpp"
#include "irg/matching.hpp"
#include "irg/prob_model.hpp"
#include "irg/rng.hpp"
#include "irg/sampler.hpp"
#include "irg/stats.hpp"

namespace {

using irg::RngStream;
using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON or @file indirection.
irg::AssignmentFamily parse_family_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@')
    return irg::family_from_json(read_file(arg.substr(1)));
  return irg::family_from_json(arg);
}

struct GraphInput {
  std::string matrix;  // assignment matrix file
  std::string family;  // family JSON (or @file)
  double p = 0.5;      // homogeneous shortcut
  int n = 64;

  void attach(CLI::App* sub) {
    sub->add_option("--matrix", matrix, "assignment matrix file");
    sub->add_option("--family", family, "family JSON or @file");
    sub->add_option("--p", p, "homogeneous edge probability")->capture_default_str();
    sub->add_option("--n", n, "vertex count")->capture_default_str();
  }

  irg::ProbabilityAssignment assignment(std::uint64_t seed) const {
    if (!matrix.empty()) return irg::load_assignment(matrix);
    irg::AssignmentFamily fam = family.empty()
                                    ? irg::AssignmentFamily(irg::Homogeneous{p})
                                    : parse_family_arg(family);
    return irg::build_assignment(fam, n, seed);
  }
};

void write_or_print(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + out + " for writing");
  f << content;
  std::cout << "wrote " << out << "\n";
}

const char* witness_kind(irg::ConditionKind k) {
  switch (k) {
    case irg::ConditionKind::GoodLower: return "good_lower";
    case irg::ConditionKind::GoodUpper: return "good_upper";
    case irg::ConditionKind::NiceSingle: return "nice_single";
    case irg::ConditionKind::NiceDouble: return "nice_double";
  }
  return "?";
}

json report_json(const irg::ConditionReport& rep) {
  json j{{"verdict", irg::to_string(rep.verdict)},
         {"margin", rep.margin},
         {"notes", rep.notes}};
  if (rep.witness) {
    const auto& w = *rep.witness;
    j["witness"] = json{{"kind", witness_kind(w.kind)}, {"u", w.u},
                        {"v", w.v},           {"r", w.r},
                        {"set1", w.set1},     {"set2", w.set2},
                        {"achieved", w.achieved}, {"required", w.required}};
  }
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "random-graph toolkit: edge-probability conditions, rotation-extension "
      "Hamiltonian path search, bipartite matching, concentration bounds, "
      "and channel-assignment experiments"};
  app.require_subcommand(0, 1);

  std::uint64_t seed = 0;
  int trials = 100;
  int threads = 1;
  std::string out;
  std::string config;
  app.add_option("--seed", seed, "master seed")->capture_default_str();
  app.add_option("--trials", trials, "trials per cell")->capture_default_str();
  app.add_option("--threads", threads, "worker threads")->capture_default_str();
  app.add_option("--out", out, "output path / prefix");
  app.add_option("--config", config, "experiment config JSON (run a sweep)");

  // ---- sample ----
  auto* sub_sample = app.add_subcommand("sample", "draw a graph, write edges");
  GraphInput sample_in;
  sample_in.attach(sub_sample);
  bool skip = false;
  sub_sample->add_flag("--skip", skip,
                       "geometric skip sampler (homogeneous only)");
  sub_sample->fallthrough();

  // ---- check ----
  auto* sub_check = app.add_subcommand("check", "goodness/niceness verdicts");
  GraphInput check_in;
  check_in.attach(sub_check);
  double alpha = 0.25, beta = 0.25, c1 = 1, c2 = 1, d1 = 1, d2 = 1;
  double p_ref = 0;
  sub_check->add_option("--alpha", alpha, "goodness alpha")->capture_default_str();
  sub_check->add_option("--beta", beta, "niceness beta")->capture_default_str();
  sub_check->add_option("--c1", c1, "goodness lower constant")->capture_default_str();
  sub_check->add_option("--c2", c2, "goodness upper constant")->capture_default_str();
  sub_check->add_option("--d1", d1, "niceness single-sum constant")->capture_default_str();
  sub_check->add_option("--d2", d2, "niceness double-sum constant")->capture_default_str();
  sub_check->add_option("--p-ref", p_ref,
                        "reference probability (default: --p)");
  bool no_nice = false;
  sub_check->add_flag("--no-nice", no_nice, "skip the niceness check");
  sub_check->fallthrough();

  // ---- ham ----
  auto* sub_ham = app.add_subcommand("ham", "rotation-extension path search");
  GraphInput ham_in;
  ham_in.attach(sub_ham);
  std::string edges_file;
  int max_rotations = 4000, max_restarts = 10, kgen = 2;
  bool emit_path = false;
  sub_ham->add_option("--edges", edges_file, "edge-list file input");
  sub_ham->add_option("--max-rotations", max_rotations,
                      "rotation budget per restart")->capture_default_str();
  sub_ham->add_option("--max-restarts", max_restarts, "restart budget")->capture_default_str();
  sub_ham->add_option("--kgen", kgen, "pivot generations to report")->capture_default_str();
  sub_ham->add_flag("--emit-path", emit_path, "include the vertex sequence");
  sub_ham->fallthrough();

  // ---- match ----
  auto* sub_match = app.add_subcommand("match", "bipartite matching bootstrap");
  GraphInput match_in;
  match_in.attach(sub_match);
  int probes = 4;
  sub_match->add_option("--probes", probes, "swap probes per trial")->capture_default_str();
  sub_match->fallthrough();

  // ---- pivots ----
  auto* sub_pivots = app.add_subcommand("pivots", "pivot generation counts");
  GraphInput pivots_in;
  pivots_in.attach(sub_pivots);
  std::string pivots_edges;
  int pk = 2, p_max_rotations = 4000, p_max_restarts = 10;
  double pc1 = 1, pc2 = 1;
  sub_pivots->add_option("--edges", pivots_edges, "edge-list file input");
  sub_pivots->add_option("--k", pk, "generations")->capture_default_str();
  sub_pivots->add_option("--max-rotations", p_max_rotations, "")->capture_default_str();
  sub_pivots->add_option("--max-restarts", p_max_restarts, "")->capture_default_str();
  sub_pivots->add_option("--c1", pc1, "interval lower constant")->capture_default_str();
  sub_pivots->add_option("--c2", pc2, "interval upper constant")->capture_default_str();
  sub_pivots->fallthrough();

  // ---- exclude ----
  auto* sub_exclude =
      app.add_subcommand("exclude", "single-vertex exclusion report");
  GraphInput exclude_in;
  exclude_in.attach(sub_exclude);
  int ej = -1, ek = 2, e_max_rotations = 4000, e_max_restarts = 10;
  sub_exclude->add_option("--j", ej, "vertex to remove (default: random)");
  sub_exclude->add_option("--k", ek, "generations")->capture_default_str();
  sub_exclude->add_option("--max-rotations", e_max_rotations, "")->capture_default_str();
  sub_exclude->add_option("--max-restarts", e_max_restarts, "")->capture_default_str();
  sub_exclude->fallthrough();

  // ---- bounds ----
  auto* sub_bounds = app.add_subcommand("bounds", "closed-form bound table");
  std::vector<int> bn{256};
  double bC = 0.1, bc1 = 1, bc2 = 1, balpha = 0.25, bd1 = 1, bd2 = 1,
         beta_ch = 0.25, bp = 0;
  int bk = 1, bl = 2;
  std::vector<int> bs{1};
  sub_bounds->add_option("--n", bn, "n values")->capture_default_str();
  sub_bounds->add_option("--C", bC, "theorem-1 constant C")->capture_default_str();
  sub_bounds->add_option("--k", bk, "theorem-1 exponent k")->capture_default_str();
  sub_bounds->add_option("--p", bp, "fixed p (default: C*n^{-k/(k+1)})");
  sub_bounds->add_option("--c1", bc1, "")->capture_default_str();
  sub_bounds->add_option("--c2", bc2, "")->capture_default_str();
  sub_bounds->add_option("--alpha", balpha, "")->capture_default_str();
  sub_bounds->add_option("--d1", bd1, "")->capture_default_str();
  sub_bounds->add_option("--d2", bd2, "")->capture_default_str();
  sub_bounds->add_option("--eta", beta_ch, "chernoff eta")->capture_default_str();
  sub_bounds->add_option("--s", bs, "nout set sizes")->capture_default_str();
  sub_bounds->add_option("--l-max", bl, "pivot depths")->capture_default_str();
  sub_bounds->fallthrough();

  // ---- channel ----
  auto* sub_channel =
      app.add_subcommand("channel", "threshold channel assignment");
  int ch_n = 256;
  double ch_lambda = std::nan("");
  double ch_rate = 1.0;
  std::string scenario_file;
  sub_channel->add_option("--n", ch_n, "users = channels")->capture_default_str();
  sub_channel->add_option("--lambda", ch_lambda,
                          "threshold (default: ln(sqrt(n)/ln n))");
  sub_channel->add_option("--rate", ch_rate, "exponential fading rate")->capture_default_str();
  sub_channel->add_option("--scenario", scenario_file, "scenario JSON file");
  sub_channel->fallthrough();

  // ---- plot ----
  auto* sub_plot = app.add_subcommand("plot", "frequency plot from summaries");
  std::vector<std::string> summaries;
  sub_plot->add_option("--summary", summaries, "summary JSON files")
      ->required();
  sub_plot->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.get_subcommands().empty()) {
      if (config.empty()) {
        std::cout << app.help();
        return 2;
      }
      irg::ExperimentConfig cfg = irg::ExperimentConfig::from_json_file(config);
      if (app.count("--seed")) cfg.master_seed = seed;
      if (app.count("--trials")) cfg.trials = trials;
      if (app.count("--threads")) cfg.threads = threads;
      if (app.count("--out")) cfg.out_prefix = out;
      irg::RunOutput ro = irg::run(cfg);
      std::cout << ro.summary_json;
      return 0;
    }
    if (!config.empty())
      throw std::invalid_argument("--config runs a sweep; drop the subcommand");

    if (*sub_sample) {
      irg::SampledGraph g;
      if (skip) {
        double p = sample_in.p;
        if (!sample_in.family.empty()) {
          auto fam = parse_family_arg(sample_in.family);
          const auto* h = std::get_if<irg::Homogeneous>(&fam);
          if (!h)
            throw std::invalid_argument("--skip needs a homogeneous family");
          p = h->p;
        }
        g = irg::sample_homogeneous_skip(sample_in.n, p, RngStream(seed, 0));
      } else {
        irg::ProbabilityAssignment a = sample_in.assignment(seed);
        g = irg::sample_graph(a, RngStream(seed, 0));
      }
      const std::string path = out.empty() ? "edges.txt" : out;
      irg::save_edge_list(g, path);
      std::cout << "n=" << g.n << " m=" << g.edge_count << " -> " << path
                << "\n";
    } else if (*sub_check) {
      irg::ProbabilityAssignment a = check_in.assignment(seed);
      const double p = p_ref > 0 ? p_ref : check_in.p;
      json j{{"n", a.n()}, {"p", p}};
      j["good"] = report_json(
          irg::check_good(a, irg::GoodnessParams{alpha, c1, c2, p}));
      auto [c1s, c2s] = irg::fit_good_constants(a, alpha, p);
      j["fit"] = json{{"c1_star", c1s}, {"c2_star", c2s}};
      if (!no_nice)
        j["nice"] = report_json(
            irg::check_nice(a, irg::NicenessParams{beta, d1, d2, p}));
      write_or_print(out, j.dump(2) + "\n");
    } else if (*sub_ham) {
      irg::SampledGraph g;
      RngStream trial(seed);
      if (!edges_file.empty()) {
        g = irg::load_edge_list(edges_file);
      } else {
        irg::ProbabilityAssignment a = ham_in.assignment(seed);
        g = irg::sample_graph(a, trial.substream(0));
      }
      irg::SearchResult sr = irg::longest_path_search(
          g, irg::SearchBudget{max_rotations, max_restarts,
                               trial.substream(1)});
      irg::PivotGenerations pg = irg::pivot_generations(g, sr.path, kgen);
      json counts = json::array();
      for (const auto& gen : pg.generations) counts.push_back(gen.size());
      json j{{"n", g.n},
             {"m", g.edge_count},
             {"seed", seed},
             {"path_length", sr.path.length()},
             {"hamiltonian", sr.path.t() == g.n},
             {"rotations_used", sr.rotations_used},
             {"restarts_used", sr.restarts_used},
             {"pivot_counts", counts}};
      if (emit_path) j["path"] = sr.path.seq;
      write_or_print(out, j.dump(2) + "\n");
    } else if (*sub_match) {
      irg::ProbabilityAssignment a = match_in.assignment(seed);
      irg::BootstrapReport rep =
          irg::bootstrap_experiment(a, trials, RngStream(seed), probes);
      json j{{"n", rep.n},
             {"z", rep.z},
             {"padded", rep.padded},
             {"trials", rep.trials},
             {"freq_low", rep.freq_low},
             {"low_wilson_lo", rep.low_wilson_lo},
             {"low_wilson_hi", rep.low_wilson_hi},
             {"freq_perfect", rep.freq_perfect},
             {"perfect_wilson_lo", rep.perfect_wilson_lo},
             {"perfect_wilson_hi", rep.perfect_wilson_hi},
             {"total_pairs_sampled", rep.total_pairs_sampled},
             {"total_augments_applied", rep.total_augments_applied}};
      std::cout << j.dump(2) << "\n";
      if (!out.empty()) {
        std::string csv =
            "trial,seed,matching_size,low_ok,perfect,pairs_sampled,"
            "augment_applied\n";
        for (const auto& r : rep.per_trial) {
          csv += std::to_string(r.trial) + "," + std::to_string(r.seed) + "," +
                 std::to_string(r.matching_size) + "," +
                 (r.low_ok ? "1" : "0") + "," + (r.perfect ? "1" : "0") + "," +
                 std::to_string(r.pairs_sampled) + "," +
                 std::to_string(r.augment_applied) + "\n";
        }
        write_or_print(out, csv);
      }
    } else if (*sub_pivots) {
      irg::SampledGraph g;
      RngStream trial(seed);
      if (!pivots_edges.empty()) {
        g = irg::load_edge_list(pivots_edges);
      } else {
        irg::ProbabilityAssignment a = pivots_in.assignment(seed);
        g = irg::sample_graph(a, trial.substream(0));
      }
      irg::SearchResult sr = irg::longest_path_search(
          g, irg::SearchBudget{p_max_rotations, p_max_restarts,
                               trial.substream(1)});
      irg::PivotGenerations pg = irg::pivot_generations(g, sr.path, pk);
      json counts = json::array();
      for (const auto& gen : pg.generations) counts.push_back(gen.size());
      const double p = pivots_in.p;
      json j{{"n", g.n},
             {"seed", seed},
             {"path_length", sr.path.length()},
             {"origin_endpoint", pg.origin_endpoint},
             {"counts", counts}};
      if (p > 0) {
        irg::IntervalReport iv = irg::pivot_interval(g.n, p, 1, pc1, pc2);
        j["interval_lo"] = iv.lo;
        j["interval_hi"] = iv.hi;
        j["p1_in_interval"] = !pg.generations.empty() &&
                              pg.generations[0].size() >= iv.lo - 1e-9 &&
                              pg.generations[0].size() <= iv.hi + 1e-9;
      }
      write_or_print(out, j.dump(2) + "\n");
    } else if (*sub_exclude) {
      RngStream trial(seed);
      irg::ProbabilityAssignment a = exclude_in.assignment(seed);
      irg::SampledGraph g = irg::sample_graph(a, trial.substream(0));
      const int j_vertex = ej >= 0 ? ej : trial.substream(2).next_int(g.n);
      irg::ExclusionReport rep = irg::exclusion_experiment(
          g, j_vertex,
          irg::SearchBudget{e_max_rotations, e_max_restarts,
                            trial.substream(1)},
          ek);
      json j{{"n", g.n},
             {"seed", seed},
             {"j", rep.j},
             {"path_length", rep.path_length},
             {"pivot_counts", rep.pivot_counts},
             {"total_pivots", rep.total_pivots},
             {"adjacent_to_pivot", rep.adjacent_to_pivot},
             {"rotations_used", rep.rotations_used},
             {"restarts_used", rep.restarts_used}};
      write_or_print(out, j.dump(2) + "\n");
    } else if (*sub_bounds) {
      irg::ExperimentConfig cfg;
      cfg.kind = "bounds";
      cfg.n_list = bn;
      cfg.t1_C = bC;
      cfg.t1_k = bk;
      cfg.c1 = bc1;
      cfg.c2 = bc2;
      cfg.alpha = balpha;
      cfg.d1 = bd1;
      cfg.d2 = bd2;
      cfg.eta = beta_ch;
      cfg.s_list = bs;
      cfg.l_max = bl;
      if (bp > 0) {
        cfg.p_rule.kind = irg::PRule::Kind::Fixed;
        cfg.p_rule.p = bp;
      } else {
        cfg.p_rule.kind = irg::PRule::Kind::Power;
        cfg.p_rule.C = bC;
        cfg.p_rule.k = bk;
      }
      cfg.master_seed = seed;
      cfg.out_prefix = out.empty() ? "out/bounds" : out;
      irg::RunOutput ro = irg::run(cfg);
      std::cout << read_file(ro.csv_path);
    } else if (*sub_channel) {
      irg::ChannelScenario sc;
      if (!scenario_file.empty()) {
        sc = irg::scenario_from_json(read_file(scenario_file));
      } else {
        sc.n = ch_n;
        sc.fading = irg::ExponentialGain{ch_rate};
        sc.lambda = std::isnan(ch_lambda)
                        ? std::log(std::sqrt(static_cast<double>(ch_n)) /
                                   std::log(static_cast<double>(ch_n)))
                        : ch_lambda;
      }
      RngStream base(seed);
      int successes = 0;
      std::string csv = "trial,seed,success,matched_count,min_matched_gain\n";
      for (int t = 0; t < trials; ++t) {
        RngStream ts = base.substream(static_cast<std::uint64_t>(t));
        const std::uint64_t sid = ts.stream_id();
        irg::AssignmentResult r = irg::simulate_assignment(sc, std::move(ts));
        successes += r.success ? 1 : 0;
        csv += std::to_string(t) + "," + std::to_string(sid) + "," +
               (r.success ? "1" : "0") + "," + std::to_string(r.matched_count) +
               "," + irg::fmt_double(r.min_matched_gain) + "\n";
      }
      auto w = irg::wilson_interval(successes, trials);
      json j{{"n", sc.n},
             {"lambda", sc.lambda},
             {"trials", trials},
             {"successes", successes},
             {"estimate", static_cast<double>(successes) / trials},
             {"wilson_lo", w.lo},
             {"wilson_hi", w.hi}};
      std::cout << j.dump(2) << "\n";
      if (!out.empty()) write_or_print(out, csv);
    } else if (*sub_plot) {
      const std::string prefix = out.empty() ? "out/plot" : out;
      irg::emit_plots(summaries, prefix);
      std::cout << "wrote " << prefix << ".svg and " << prefix << ".py\n";
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
