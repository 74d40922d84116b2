// Bipartite maximum matching, the two-edge augmentation move, and the
// bootstrap experiment over bipartite samples.
//
// The maximum matching follows a fixed deterministic rule so that identical
// inputs give identical matchings on every platform: left vertices are
// scanned in increasing label order and each is matched through a shortest
// augmenting path found by breadth-first layered search with smallest-label
// tie-breaking.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "irg/rng.hpp"
#include "irg/sampler.hpp"

namespace irg {

struct Matching {
  // (left, right) vertex pairs; vertex-disjoint by construction
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(edges.size()); }
  int covered_count() const { return 2 * size(); }
  bool covers(int v) const;
  std::vector<int> covered_vertices() const;  // sorted
};

// True iff the matching covers every vertex except at most one.
bool is_perfect(const Matching& m, int n);

// Every edge present in g and no vertex used twice.
bool matching_valid(const Matching& m, const SampledGraph& g);

Matching maximum_matching(const SampledGraph& g);

// The two-edge swap: given uncovered w on the left and v on the right,
// either add (w,v) directly, or find a matched edge (u,y) with (u,v) and
// (w,y) both present and replace it by those two edges. Returns the larger
// matching, or nothing when no such move exists.
std::optional<Matching> augment_with_pair(const Matching& m,
                                          const SampledGraph& g, int w, int v);

// ---------- bootstrap experiment ----------

struct BootstrapTrial {
  int trial = 0;
  std::uint64_t seed = 0;
  int matching_size = 0;
  bool low_ok = false;    // matching size >= z
  bool perfect = false;   // covers >= n-1 vertices
  int pairs_sampled = 0;  // uncovered pairs probed with the swap
  int augment_applied = 0;
};

struct BootstrapReport {
  int n = 0;
  int z = 0;  // floor(n/4)
  bool padded = false;  // n not divisible by 4
  int trials = 0;
  double freq_low = 0, low_wilson_lo = 0, low_wilson_hi = 0;
  double freq_perfect = 0, perfect_wilson_lo = 0, perfect_wilson_hi = 0;
  int total_pairs_sampled = 0;
  int total_augments_applied = 0;  // zero whenever the matching is maximum
  std::vector<BootstrapTrial> per_trial;
};

// Splits the vertex set into X = first ceil(n/2) labels and Y = the rest,
// samples the bipartite graph per trial, and records the half-size event,
// perfection, and swap probes on uncovered pairs.
BootstrapReport bootstrap_experiment(const ProbabilityAssignment& a,
                                     int trials, RngStream rng,
                                     int pair_probes_per_trial = 4);

// ---------- matching text format: one "x y" line per edge, 1-indexed ----------
void save_matching(const Matching& m, const std::string& path);
Matching load_matching(const std::string& path);

}  // namespace irg
