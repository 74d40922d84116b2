// Pósa rotation, the rotation-extension long-path search, pivot-generation
// enumeration, the single-vertex-exclusion experiment, and an exact
// Hamiltonian-path oracle for n <= 20.
//
// Conventions: a path is the sequence (u1,...,ut); rotations operate on the
// head u1 with a 1-based chord position a (3 <= a <= t), producing
// (u_{a-1},...,u1,u_a,...,u_t) with pivot u_{a-1}. Tie-breaking is
// smallest-vertex-label everywhere; the only randomness is restart start
// vertices drawn from the search budget's stream.

#pragma once

#include <optional>
#include <vector>

#include "irg/matching.hpp"
#include "irg/rng.hpp"
#include "irg/sampler.hpp"

namespace irg {

struct PathState {
  std::vector<int> seq;  // distinct vertices, consecutive ones adjacent in g
  std::vector<int> pos;  // vertex -> index in seq, -1 if absent; size n

  static PathState single(int v, int n);
  // Validates range and distinctness (adjacency needs g; see path_valid).
  static PathState from_sequence(std::vector<int> seq, int n);

  int t() const { return static_cast<int>(seq.size()); }  // vertex count
  int length() const { return t() - 1; }                  // edge count
  bool contains(int v) const { return pos[v] >= 0; }
  int head() const { return seq.front(); }
  int tail() const { return seq.back(); }
  void reverse();
};

// Full invariant check against the host graph (range, distinctness, pos
// consistency, consecutive adjacency).
bool path_valid(const PathState& path, const SampledGraph& g);

// Both endpoints' neighborhoods lie inside the path (property the search
// guarantees on return; rotations preserve it only for the vertex set).
bool is_maximal(const PathState& path, const SampledGraph& g);

// Chord position a is 1-based: requires 3 <= a <= t and (u1, u_a) in g.
PathState posa_rotate(const PathState& path, const SampledGraph& g,
                      int chord_index);

// One-step extension: head's smallest-label outside neighbor is prepended if
// any, else tail's is appended, else nothing (the path is then maximal).
std::optional<PathState> extend(const PathState& path, const SampledGraph& g);

struct SearchBudget {
  int max_rotations = 2000;  // per restart
  int max_restarts = 10;
  RngStream rng;
};

struct SearchResult {
  PathState path;
  int rotations_used = 0;
  int restarts_used = 0;
};

// Rotation-extension heuristic: greedy extension, then a breadth-first
// closure of rotation-derived endpoints (head side, then reversed); any
// derived endpoint with an outside neighbor triggers adoption + further
// greedy extension. Restarts keep the best path; it is always maximal but
// not guaranteed maximum-length.
SearchResult longest_path_search(const SampledGraph& g, SearchBudget budget);

struct PivotRecord {
  int vertex = -1;
  int generation = 0;      // first generation in which the vertex appeared
  std::vector<int> chain;  // 1-based chord positions replayable from origin
  std::vector<int> gamma;  // the rotated sequence ending at vertex
};

struct PivotGenerations {
  PathState origin;  // maximal path the rotations started from
  int origin_endpoint = -1;
  std::vector<std::vector<int>> generations;  // P_1..P_k, each sorted
  std::vector<PivotRecord> records;           // in tag (breadth-first) order
};

// P_1 = { u_{a-1} : (u1,u_a) in g, a >= 3 }; P_{l+1} applies the rotation
// rule to each stored gamma_v, v in P_l, over v's neighbors on gamma_v.
// First-tag-wins: generations partition the pivot set, and the origin
// endpoint (generation 0) is never reported. Requires a maximal path.
PivotGenerations pivot_generations(const SampledGraph& g,
                                   const PathState& path, int k);

struct ExclusionReport {
  int j = -1;
  int path_length = 0;            // edge count of the heuristic longest path
  std::vector<int> pivot_counts;  // per generation 1..k
  int total_pivots = 0;
  std::vector<int> pivots;        // distinct, original labels, sorted
  bool adjacent_to_pivot = false; // j adjacent in g to some pivot of pi_j
  int rotations_used = 0;
  int restarts_used = 0;
};

// Removes j (relabeling the rest), searches for a long path, enumerates
// pivots up to generation k, and checks j's adjacency to them in g.
ExclusionReport exclusion_experiment(const SampledGraph& g, int j,
                                     SearchBudget budget, int k);

// Bitmask dynamic program over subsets; exact. Rejects n > 20.
std::optional<PathState> exact_hamiltonian_path(const SampledGraph& g);

// Every alternate edge: (u1,u2), (u3,u4), ...
Matching path_to_matching(const PathState& path);

}  // namespace irg
