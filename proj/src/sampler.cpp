#include "irg/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace irg {

bool SampledGraph::has_edge(int u, int v) const {
  if (u == v) return false;
  const auto& nb = adj[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

void SampledGraph::add_edge(int u, int v) {
  auto insert_sorted = [](std::vector<int>& list, int x) {
    list.insert(std::upper_bound(list.begin(), list.end(), x), x);
  };
  insert_sorted(adj[u], v);
  insert_sorted(adj[v], u);
  ++edge_count;
}

SampledGraph sample_graph(const ProbabilityAssignment& a, RngStream rng) {
  const int n = a.n();
  SampledGraph g;
  g.n = n;
  g.adj.assign(n, {});
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (rng.next_double() < a.at(u, v)) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
        ++g.edge_count;
      }
    }
  }
  // lexicographic visiting order appends each list's entries ascending
  return g;
}

SampledGraph sample_bipartite(const ProbabilityAssignment& a,
                              const Bipartition& split, RngStream rng) {
  const int n = a.n();
  std::vector<int> side(n, -1);
  for (int v : split.left) {
    if (v < 0 || v >= n || side[v] != -1) {
      throw std::invalid_argument("bipartition left side invalid");
    }
    side[v] = 0;
  }
  for (int v : split.right) {
    if (v < 0 || v >= n || side[v] != -1) {
      throw std::invalid_argument("bipartition sides overlap or repeat");
    }
    side[v] = 1;
  }
  for (int v = 0; v < n; ++v) {
    if (side[v] == -1) {
      throw std::invalid_argument("bipartition does not cover all vertices");
    }
  }

  SampledGraph g;
  g.n = n;
  g.adj.assign(n, {});
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (side[u] == side[v]) continue;  // same side: no draw consumed
      if (rng.next_double() < a.at(u, v)) {
        g.adj[u].push_back(v);
        g.adj[v].push_back(u);
        ++g.edge_count;
      }
    }
  }

  Bipartition bp;
  bp.left = split.left;
  bp.right = split.right;
  std::sort(bp.left.begin(), bp.left.end());
  std::sort(bp.right.begin(), bp.right.end());
  g.bipartition = std::move(bp);
  return g;
}

SampledGraph sample_homogeneous_skip(int n, double p, RngStream rng) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p outside [0,1]");
  SampledGraph g;
  g.n = n;
  g.adj.assign(n, {});
  if (p <= 0) return g;
  const std::size_t total = static_cast<std::size_t>(n) * (n - 1) / 2;
  if (p >= 1) {
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) g.adj[u].push_back(v), g.adj[v].push_back(u);
    g.edge_count = total;
    return g;
  }
  // geometric skips through the flattened pair sequence: the gap to the
  // next kept pair is floor(log(u)/log(1-p)) for u uniform in (0,1)
  const double log_q = std::log1p(-p);
  std::size_t pos = 0;
  while (true) {
    double u = rng.next_double();
    if (u <= 0) u = 0x1.0p-53;  // next_double never returns 1, guard the 0 side
    const double jump = std::floor(std::log(u) / log_q);
    if (jump >= static_cast<double>(total - pos)) break;
    pos += static_cast<std::size_t>(jump);
    // unflatten pos -> (a,b), lexicographic over u < v
    std::size_t rem = pos;
    int a = 0;
    std::size_t row = static_cast<std::size_t>(n) - 1;
    while (rem >= row) {
      rem -= row;
      --row;
      ++a;
    }
    const int b = a + 1 + static_cast<int>(rem);
    g.adj[a].push_back(b);
    g.adj[b].push_back(a);
    ++g.edge_count;
    if (++pos >= total) break;
  }
  return g;
}

std::vector<int> neighborhood_out(const SampledGraph& g,
                                  const std::vector<int>& S) {
  std::vector<char> in_s(g.n, 0), seen(g.n, 0);
  for (int v : S) in_s[v] = 1;
  std::vector<int> out;
  for (int v : S) {
    for (int w : g.adj[v]) {
      if (!in_s[w] && !seen[w]) {
        seen[w] = 1;
        out.push_back(w);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ExpansionRow> expansion_statistics(const ProbabilityAssignment& a,
                                               const ExpansionConfig& cfg,
                                               RngStream rng) {
  if (cfg.sizes.empty() || cfg.trials_per_size < 1) {
    throw std::invalid_argument("expansion needs sizes and trials >= 1");
  }
  const int n = a.n();
  const double regime_cap = 1.0 / (10.0 * cfg.c2 * cfg.p);

  std::vector<std::vector<int>> observed(cfg.sizes.size());
  for (int t = 0; t < cfg.trials_per_size; ++t) {
    RngStream trial = rng.substream(static_cast<std::uint64_t>(t));
    SampledGraph g = sample_graph(a, trial);
    for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
      const std::vector<int> S = trial.sample_subset(n, cfg.sizes[i]);
      observed[i].push_back(static_cast<int>(neighborhood_out(g, S).size()));
    }
  }

  std::vector<ExpansionRow> rows;
  for (std::size_t i = 0; i < cfg.sizes.size(); ++i) {
    ExpansionRow row;
    row.s = cfg.sizes[i];
    row.trials = cfg.trials_per_size;
    row.predicted_lo = cfg.c1 * n * cfg.p * row.s / 2.0;
    row.predicted_hi = 4.0 * cfg.c2 * n * cfg.p * row.s;
    row.regime_ok = row.s <= regime_cap;
    std::vector<int>& obs = observed[i];
    std::sort(obs.begin(), obs.end());
    row.observed_min = obs.front();
    row.observed_median = obs[obs.size() / 2];
    row.observed_max = obs.back();
    int in = 0;
    for (int x : obs) {
      if (x >= row.predicted_lo - 1e-9 && x <= row.predicted_hi + 1e-9) ++in;
    }
    row.fraction_in_interval = static_cast<double>(in) / obs.size();
    rows.push_back(row);
  }
  return rows;
}

void save_edge_list(const SampledGraph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << g.n << ' ' << g.edge_count << "\n";
  for (int u = 0; u < g.n; ++u) {
    for (int v : g.adj[u]) {
      if (v > u) out << u + 1 << ' ' << v + 1 << "\n";
    }
  }
}

SampledGraph load_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int n = 0;
  std::size_t m = 0;
  if (!(in >> n >> m) || n < 1) {
    throw std::runtime_error("bad edge list header in " + path);
  }
  SampledGraph g;
  g.n = n;
  g.adj.assign(n, {});
  for (std::size_t i = 0; i < m; ++i) {
    int u, v;
    if (!(in >> u >> v)) throw std::runtime_error("truncated edge list " + path);
    if (u < 1 || v < 1 || u > n || v > n || u == v) {
      throw std::runtime_error("bad edge in " + path);
    }
    g.adj[u - 1].push_back(v - 1);
    g.adj[v - 1].push_back(u - 1);
    ++g.edge_count;
  }
  for (auto& nb : g.adj) std::sort(nb.begin(), nb.end());
  return g;
}

}  // namespace irg
