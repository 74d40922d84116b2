#include "irg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <queue>
#include <stdexcept>
#include <string>

#include "irg/stats.hpp"

namespace irg {

bool Matching::covers(int v) const {
  for (const auto& [a, b] : edges)
    if (a == v || b == v) return true;
  return false;
}

std::vector<int> Matching::covered_vertices() const {
  std::vector<int> out;
  out.reserve(edges.size() * 2);
  for (const auto& [a, b] : edges) {
    out.push_back(a);
    out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool is_perfect(const Matching& m, int n) {
  return m.covered_count() >= n - 1;
}

bool matching_valid(const Matching& m, const SampledGraph& g) {
  std::vector<char> used(g.n, 0);
  for (const auto& [a, b] : m.edges) {
    if (a < 0 || a >= g.n || b < 0 || b >= g.n) return false;
    if (!g.has_edge(a, b)) return false;
    if (used[a] || used[b]) return false;
    used[a] = used[b] = 1;
  }
  return true;
}

Matching maximum_matching(const SampledGraph& g) {
  if (!g.bipartition)
    throw std::invalid_argument("maximum_matching: graph has no bipartition");
  const Bipartition& bp = *g.bipartition;

  std::vector<int> mate(g.n, -1);
  std::vector<int> reached_from(g.n, -1);  // for right vertices: BFS parent
  std::vector<char> in_queue(g.n, 0);

  // Left labels ascending; each BFS explores sorted adjacency in FIFO order,
  // so the augmenting path taken is the lexicographically first shortest one.
  for (int u : bp.left) {
    std::fill(reached_from.begin(), reached_from.end(), -1);
    std::fill(in_queue.begin(), in_queue.end(), 0);
    std::queue<int> q;
    q.push(u);
    in_queue[u] = 1;
    int free_right = -1;
    while (!q.empty() && free_right == -1) {
      int x = q.front();
      q.pop();
      for (int v : g.adj[x]) {
        if (reached_from[v] != -1) continue;
        reached_from[v] = x;
        if (mate[v] == -1) {
          free_right = v;
          break;
        }
        int y = mate[v];
        if (!in_queue[y]) {
          in_queue[y] = 1;
          q.push(y);
        }
      }
    }
    if (free_right == -1) continue;
    for (int v = free_right; v != -1;) {
      int x = reached_from[v];
      int next_v = mate[x];
      mate[x] = v;
      mate[v] = x;
      v = next_v;
    }
  }

  Matching m;
  for (int u : bp.left)
    if (mate[u] != -1) m.edges.emplace_back(u, mate[u]);
  return m;
}

std::optional<Matching> augment_with_pair(const Matching& m,
                                          const SampledGraph& g, int w,
                                          int v) {
  if (w < 0 || w >= g.n || v < 0 || v >= g.n)
    throw std::invalid_argument("augment_with_pair: vertex out of range");
  if (m.covers(w) || m.covers(v))
    throw std::invalid_argument("augment_with_pair: endpoint already covered");

  if (g.has_edge(w, v)) {
    Matching out = m;
    out.edges.emplace_back(w, v);
    return out;
  }
  // Two-edge move: matched (u,y) with (u,v) and (w,y) present gets traded
  // for those two edges. Scan in stored order; matchings we build keep
  // left labels ascending, so the move is deterministic.
  for (std::size_t i = 0; i < m.edges.size(); ++i) {
    const auto [u, y] = m.edges[i];
    if (g.has_edge(u, v) && g.has_edge(w, y)) {
      Matching out = m;
      out.edges[i] = {u, v};
      out.edges.emplace_back(w, y);
      return out;
    }
  }
  return std::nullopt;
}

BootstrapReport bootstrap_experiment(const ProbabilityAssignment& a,
                                     int trials, RngStream rng,
                                     int pair_probes_per_trial) {
  const int n = a.n();
  if (n < 4) throw std::invalid_argument("bootstrap_experiment: need n >= 4");
  if (trials <= 0)
    throw std::invalid_argument("bootstrap_experiment: trials must be positive");

  BootstrapReport rep;
  rep.n = n;
  rep.z = n / 4;
  rep.padded = (n % 4 != 0);
  rep.trials = trials;

  Bipartition split;
  const int left_size = (n + 1) / 2;
  for (int i = 0; i < left_size; ++i) split.left.push_back(i);
  for (int i = left_size; i < n; ++i) split.right.push_back(i);

  int low_hits = 0, perfect_hits = 0;
  for (int t = 0; t < trials; ++t) {
    RngStream ts = rng.substream(static_cast<std::uint64_t>(t));
    BootstrapTrial row;
    row.trial = t;
    row.seed = ts.stream_id();

    SampledGraph g = sample_bipartite(a, split, ts);
    Matching m = maximum_matching(g);
    row.matching_size = m.size();
    row.low_ok = m.size() >= rep.z;
    row.perfect = is_perfect(m, n);

    // Probe the two-edge move on uncovered pairs; on a maximum matching it
    // can never apply, which the counter is there to confirm.
    std::vector<char> cov(n, 0);
    for (const auto& [x, y] : m.edges) cov[x] = cov[y] = 1;
    std::vector<int> free_left, free_right;
    for (int x : split.left)
      if (!cov[x]) free_left.push_back(x);
    for (int y : split.right)
      if (!cov[y]) free_right.push_back(y);
    if (!free_left.empty() && !free_right.empty()) {
      for (int k = 0; k < pair_probes_per_trial; ++k) {
        int w = free_left[ts.next_int(static_cast<int>(free_left.size()))];
        int v = free_right[ts.next_int(static_cast<int>(free_right.size()))];
        ++row.pairs_sampled;
        if (augment_with_pair(m, g, w, v)) ++row.augment_applied;
      }
    }

    low_hits += row.low_ok ? 1 : 0;
    perfect_hits += row.perfect ? 1 : 0;
    rep.total_pairs_sampled += row.pairs_sampled;
    rep.total_augments_applied += row.augment_applied;
    rep.per_trial.push_back(row);
  }

  rep.freq_low = static_cast<double>(low_hits) / trials;
  rep.freq_perfect = static_cast<double>(perfect_hits) / trials;
  auto wl = wilson_interval(low_hits, trials);
  rep.low_wilson_lo = wl.lo;
  rep.low_wilson_hi = wl.hi;
  auto wp = wilson_interval(perfect_hits, trials);
  rep.perfect_wilson_lo = wp.lo;
  rep.perfect_wilson_hi = wp.hi;
  return rep;
}

void save_matching(const Matching& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_matching: cannot open " + path);
  for (const auto& [a, b] : m.edges) out << a + 1 << ' ' << b + 1 << '\n';
}

Matching load_matching(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_matching: cannot open " + path);
  Matching m;
  int x, y;
  while (in >> x >> y) {
    if (x < 1 || y < 1)
      throw std::runtime_error("load_matching: vertices are 1-indexed");
    m.edges.emplace_back(x - 1, y - 1);
  }
  return m;
}

}  // namespace irg
