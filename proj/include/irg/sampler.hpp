// Graph realization by independent Bernoulli edge draws, plus the outer
// neighborhood machinery used by the expansion experiments.
//
// Draw discipline (the one the seeds pin down): unordered pairs (u,v) with
// u < v are visited in lexicographic order; each visited pair consumes one
// uniform draw and the edge is kept iff draw < p(u,v). Bipartite sampling
// visits the same order but draws only for cross pairs. The skip-sampling
// path for homogeneous assignments is a separate documented discipline
// (geometric jumps through the lexicographic pair sequence) and is opt-in.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irg/prob_model.hpp"
#include "irg/rng.hpp"

namespace irg {

struct Bipartition {
  std::vector<int> left;   // sorted
  std::vector<int> right;  // sorted
};

struct SampledGraph {
  int n = 0;
  std::vector<std::vector<int>> adj;  // sorted neighbor lists
  std::size_t edge_count = 0;
  std::optional<Bipartition> bipartition;

  bool has_edge(int u, int v) const;
  int degree(int v) const { return static_cast<int>(adj[v].size()); }

  // Insert an undirected edge; neighbor lists stay sorted.
  void add_edge(int u, int v);
};

SampledGraph sample_graph(const ProbabilityAssignment& a, RngStream rng);

// Only pairs with one endpoint on each side are drawn; the split must
// partition {0..n-1}.
SampledGraph sample_bipartite(const ProbabilityAssignment& a,
                              const Bipartition& split, RngStream rng);

// Homogeneous G(n,p) via geometric skips; opt-in fast path for large n.
// Not draw-compatible with sample_graph.
SampledGraph sample_homogeneous_skip(int n, double p, RngStream rng);

// Vertices outside S adjacent to at least one vertex of S.
std::vector<int> neighborhood_out(const SampledGraph& g,
                                  const std::vector<int>& S);

// ---------- expansion experiment (Step-1 regime) ----------

struct ExpansionConfig {
  std::vector<int> sizes;
  int trials_per_size = 100;
  double c1 = 1, c2 = 1;
  double p = 0;  // reference probability for the predicted interval
};

struct ExpansionRow {
  int s = 0;
  int trials = 0;
  double fraction_in_interval = 0;
  double predicted_lo = 0, predicted_hi = 0;  // [c1*n*p*s/2, 4*c2*n*p*s]
  int observed_min = 0, observed_median = 0, observed_max = 0;
  bool regime_ok = true;  // s <= 1/(10*c2*p)
};

// Each trial draws a fresh graph from the assignment and, for every
// requested size, a fresh uniform set S; reports how often N_out(S) lands
// in the predicted interval. Out-of-regime sizes are flagged, not refused.
std::vector<ExpansionRow> expansion_statistics(const ProbabilityAssignment& a,
                                               const ExpansionConfig& cfg,
                                               RngStream rng);

// ---------- edge-list text format ----------
// Header "n m" then one "u v" line per edge, 1-indexed, u < v, sorted.
void save_edge_list(const SampledGraph& g, const std::string& path);
SampledGraph load_edge_list(const std::string& path);

}  // namespace irg
