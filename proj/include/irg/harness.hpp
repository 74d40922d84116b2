// Experiment orchestration: seeded Monte-Carlo sweeps over a parameter
// grid, per-trial CSV + per-cell JSON summaries, and plot emission.
//
// Reproducibility contract: every trial runs on RngStream(master_seed,
// mix64(cell_index, trial_index)); records are stored by (cell, trial)
// index and written after all workers join, so output bytes do not depend
// on --threads. Wall-clock goes to stderr, never into output files.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irg/channel.hpp"
#include "irg/prob_model.hpp"

namespace irg {

// Reference edge probability as a function of n.
struct PRule {
  enum class Kind { Fixed, Power, LogOverSqrt };
  Kind kind = Kind::Fixed;
  double p = 0.5;  // Fixed
  double C = 1.0;  // Power: p = C * n^{-k/(k+1)}
  int k = 1;

  double value(int n) const;
};

struct ExperimentConfig {
  int schema_version = 1;
  // ham_frequency | per_frequency | expansion | pivots | exclusion |
  // channel | bounds | check
  std::string kind;
  std::vector<int> n_list;
  int trials = 1;
  std::uint64_t master_seed = 0;
  int threads = 1;
  std::string out_prefix = "experiment";

  std::optional<AssignmentFamily> family;  // fixed family for every n
  PRule p_rule;                            // used when family is absent

  int max_rotations = 4000;  // search budget
  int max_restarts = 10;
  int generations = 2;  // pivot generations k

  std::vector<int> sizes;  // expansion set sizes
  int probes = 4;          // per_frequency swap probes per trial

  double c1 = 1, c2 = 1, d1 = 1, d2 = 1;
  double alpha = 0.25, beta = 0.25;
  double eta = 0.25;        // bounds: chernoff at mu = n*p
  std::vector<int> s_list;  // bounds: nout sizes
  int l_max = 2;            // bounds: pivot interval depths
  double t1_C = 0.1;        // bounds: theorem-1 constants
  int t1_k = 1;

  FadingModel fading = ExponentialGain{};
  // channel threshold grid; empty -> per-n rule lambda = ln(sqrt(n)/ln n)
  std::vector<double> lambdas;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_json_file(const std::string& path);
};

// Reference p for a cell: homogeneous family's p if set, else p_rule(n).
double cell_p(const ExperimentConfig& cfg, int n);

struct RunOutput {
  std::string csv_path;
  std::string summary_path;
  std::string summary_json;
};

RunOutput run(const ExperimentConfig& cfg);

// Reads summary JSONs and writes <out_prefix>.svg (deterministic bytes)
// plus <out_prefix>.py, a standalone matplotlib version of the same plot.
void emit_plots(const std::vector<std::string>& summary_paths,
                const std::string& out_prefix);

// Locale-independent shortest round-trip formatting for all output files.
std::string fmt_double(double x);

}  // namespace irg
