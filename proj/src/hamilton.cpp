#include "irg/hamilton.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <deque>
#include <stdexcept>

namespace irg {

namespace {

// Reverse the first a-1 entries: (u1..ut), chord at 1-based a ->
// (u_{a-1},...,u1,u_a,...,u_t).
std::vector<int> rotate_seq(const std::vector<int>& s, int a) {
  std::vector<int> out;
  out.reserve(s.size());
  out.insert(out.end(), s.rend() - (a - 1), s.rend());
  out.insert(out.end(), s.begin() + (a - 1), s.end());
  return out;
}

}  // namespace

PathState PathState::single(int v, int n) {
  PathState p;
  p.seq = {v};
  p.pos.assign(n, -1);
  p.pos[v] = 0;
  return p;
}

PathState PathState::from_sequence(std::vector<int> seq, int n) {
  PathState p;
  p.pos.assign(n, -1);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    int v = seq[i];
    if (v < 0 || v >= n)
      throw std::invalid_argument("PathState: vertex out of range");
    if (p.pos[v] != -1)
      throw std::invalid_argument("PathState: duplicate vertex");
    p.pos[v] = static_cast<int>(i);
  }
  p.seq = std::move(seq);
  return p;
}

void PathState::reverse() {
  std::reverse(seq.begin(), seq.end());
  for (std::size_t i = 0; i < seq.size(); ++i)
    pos[seq[i]] = static_cast<int>(i);
}

bool path_valid(const PathState& path, const SampledGraph& g) {
  if (path.seq.empty()) return false;
  if (static_cast<int>(path.pos.size()) != g.n) return false;
  std::vector<char> on(g.n, 0);
  for (std::size_t i = 0; i < path.seq.size(); ++i) {
    int v = path.seq[i];
    if (v < 0 || v >= g.n || on[v]) return false;
    on[v] = 1;
    if (path.pos[v] != static_cast<int>(i)) return false;
  }
  for (int v = 0; v < g.n; ++v)
    if (!on[v] && path.pos[v] != -1) return false;
  for (std::size_t i = 0; i + 1 < path.seq.size(); ++i)
    if (!g.has_edge(path.seq[i], path.seq[i + 1])) return false;
  return true;
}

bool is_maximal(const PathState& path, const SampledGraph& g) {
  for (int w : g.adj[path.head()])
    if (!path.contains(w)) return false;
  for (int w : g.adj[path.tail()])
    if (!path.contains(w)) return false;
  return true;
}

PathState posa_rotate(const PathState& path, const SampledGraph& g,
                      int chord_index) {
  const int t = path.t();
  if (chord_index <= 2)
    throw std::invalid_argument("posa_rotate: chord position must be >= 3");
  if (chord_index > t)
    throw std::invalid_argument("posa_rotate: chord position beyond path end");
  if (!g.has_edge(path.seq[0], path.seq[chord_index - 1]))
    throw std::invalid_argument("posa_rotate: (u1, u_a) is not an edge");
  PathState out;
  out.seq = rotate_seq(path.seq, chord_index);
  out.pos = path.pos;
  for (int i = 0; i < chord_index - 1; ++i) out.pos[out.seq[i]] = i;
  return out;
}

std::optional<PathState> extend(const PathState& path, const SampledGraph& g) {
  for (int w : g.adj[path.head()]) {
    if (path.contains(w)) continue;
    PathState out = path;
    out.seq.insert(out.seq.begin(), w);
    for (std::size_t i = 0; i < out.seq.size(); ++i)
      out.pos[out.seq[i]] = static_cast<int>(i);
    return out;
  }
  for (int w : g.adj[path.tail()]) {
    if (path.contains(w)) continue;
    PathState out = path;
    out.seq.push_back(w);
    out.pos[w] = out.t() - 1;
    return out;
  }
  return std::nullopt;
}

namespace {

enum class ClosureOutcome { Extended, Exhausted, Budget };

// Breadth-first closure of head endpoints reachable by rotations. Adopts
// (and returns Extended) as soon as any derived head sees a vertex outside
// the path; each newly derived endpoint costs one rotation from the budget.
ClosureOutcome head_closure(PathState& path, const SampledGraph& g,
                            int max_rotations, int& rotations_in_restart,
                            int& rotations_total) {
  const int n = g.n;
  std::vector<char> seen(n, 0);
  seen[path.head()] = 1;
  std::deque<std::vector<int>> frontier;
  frontier.push_back(path.seq);
  std::vector<int> pos(n);
  while (!frontier.empty()) {
    std::vector<int> s = std::move(frontier.front());
    frontier.pop_front();
    std::fill(pos.begin(), pos.end(), -1);
    for (std::size_t i = 0; i < s.size(); ++i)
      pos[s[i]] = static_cast<int>(i);
    for (int w : g.adj[s[0]]) {
      int ip = pos[w];
      if (ip == -1) {
        s.insert(s.begin(), w);
        path = PathState::from_sequence(std::move(s), n);
        return ClosureOutcome::Extended;
      }
      if (ip < 2) continue;
      int pivot = s[ip - 1];
      if (seen[pivot]) continue;
      if (rotations_in_restart >= max_rotations) return ClosureOutcome::Budget;
      seen[pivot] = 1;
      ++rotations_in_restart;
      ++rotations_total;
      frontier.push_back(rotate_seq(s, ip + 1));
    }
  }
  return ClosureOutcome::Exhausted;
}

}  // namespace

SearchResult longest_path_search(const SampledGraph& g, SearchBudget budget) {
  if (g.n < 1)
    throw std::invalid_argument("longest_path_search: empty graph");
  if (budget.max_rotations <= 0 || budget.max_restarts <= 0)
    throw std::invalid_argument("longest_path_search: budget must be positive");

  SearchResult res;
  PathState best;
  for (int restart = 0; restart < budget.max_restarts; ++restart) {
    ++res.restarts_used;
    int start = budget.rng.next_int(g.n);
    PathState path = PathState::single(start, g.n);
    while (auto e = extend(path, g)) path = std::move(*e);

    int rot_in_restart = 0;
    int exhaust_streak = 0;  // head and tail closures both dry -> done
    while (exhaust_streak < 2 && path.t() < g.n) {
      ClosureOutcome out = head_closure(path, g, budget.max_rotations,
                                        rot_in_restart, res.rotations_used);
      if (out == ClosureOutcome::Extended) {
        exhaust_streak = 0;
        while (auto e = extend(path, g)) path = std::move(*e);
      } else if (out == ClosureOutcome::Exhausted) {
        ++exhaust_streak;
        path.reverse();
      } else {
        break;  // budget spent
      }
    }
    if (path.t() > best.t()) best = std::move(path);
    if (best.t() == g.n) break;
  }
  res.path = std::move(best);
  return res;
}

PivotGenerations pivot_generations(const SampledGraph& g,
                                   const PathState& path, int k) {
  if (k < 1) throw std::invalid_argument("pivot_generations: k must be >= 1");
  if (!is_maximal(path, g))
    throw std::invalid_argument("pivot_generations: path is not maximal");

  const int n = g.n;
  PivotGenerations out;
  out.origin = path;
  out.origin_endpoint = path.head();

  std::vector<int> tag(n, -1);
  tag[path.head()] = 0;  // generation 0: never reported as a pivot

  std::vector<int> pos(n);
  // Applies the rotation rule to parent sequence s over the head's
  // neighbors on s, tagging untouched pivots with generation gen.
  auto expand = [&](const std::vector<int>& s, const std::vector<int>& chain,
                    int gen, std::vector<int>& new_records) {
    std::fill(pos.begin(), pos.end(), -1);
    for (std::size_t i = 0; i < s.size(); ++i)
      pos[s[i]] = static_cast<int>(i);
    for (int w : g.adj[s[0]]) {
      int ip = pos[w];
      if (ip < 2) continue;  // a <= 2 and off-path neighbors yield no pivot
      int piv = s[ip - 1];
      if (tag[piv] != -1) continue;
      tag[piv] = gen;
      PivotRecord rec;
      rec.vertex = piv;
      rec.generation = gen;
      rec.chain = chain;
      rec.chain.push_back(ip + 1);
      rec.gamma = rotate_seq(s, ip + 1);
      new_records.push_back(static_cast<int>(out.records.size()));
      out.records.push_back(std::move(rec));
    }
  };

  std::vector<int> frontier;  // record indices of the previous generation
  for (int l = 1; l <= k; ++l) {
    std::vector<int> next;
    if (l == 1) {
      expand(path.seq, {}, 1, next);
    } else {
      for (int idx : frontier) {
        // copy: expand may reallocate out.records
        std::vector<int> s = out.records[idx].gamma;
        std::vector<int> chain = out.records[idx].chain;
        expand(s, chain, l, next);
      }
    }
    std::vector<int> gen_set;
    gen_set.reserve(next.size());
    for (int idx : next) gen_set.push_back(out.records[idx].vertex);
    std::sort(gen_set.begin(), gen_set.end());
    out.generations.push_back(std::move(gen_set));
    frontier = std::move(next);
  }
  return out;
}

ExclusionReport exclusion_experiment(const SampledGraph& g, int j,
                                     SearchBudget budget, int k) {
  if (j < 0 || j >= g.n)
    throw std::invalid_argument("exclusion_experiment: j out of range");
  if (g.n < 2)
    throw std::invalid_argument("exclusion_experiment: need n >= 2");

  SampledGraph gj;
  gj.n = g.n - 1;
  gj.adj.assign(gj.n, {});
  auto relabel = [j](int v) { return v < j ? v : v - 1; };
  for (int u = 0; u < g.n; ++u) {
    if (u == j) continue;
    for (int v : g.adj[u]) {
      if (v == j) continue;
      if (v > u) gj.add_edge(relabel(u), relabel(v));
    }
  }

  SearchResult sr = longest_path_search(gj, std::move(budget));
  PivotGenerations pg = pivot_generations(gj, sr.path, k);

  ExclusionReport rep;
  rep.j = j;
  rep.path_length = sr.path.length();
  rep.rotations_used = sr.rotations_used;
  rep.restarts_used = sr.restarts_used;
  auto original = [j](int v) { return v < j ? v : v + 1; };
  for (const auto& gen : pg.generations) {
    rep.pivot_counts.push_back(static_cast<int>(gen.size()));
    for (int v : gen) rep.pivots.push_back(original(v));
  }
  std::sort(rep.pivots.begin(), rep.pivots.end());
  rep.total_pivots = static_cast<int>(rep.pivots.size());
  for (int v : rep.pivots)
    if (g.has_edge(j, v)) {
      rep.adjacent_to_pivot = true;
      break;
    }
  return rep;
}

std::optional<PathState> exact_hamiltonian_path(const SampledGraph& g) {
  if (g.n > 20)
    throw std::invalid_argument("exact_hamiltonian_path: n must be <= 20");
  if (g.n < 1)
    throw std::invalid_argument("exact_hamiltonian_path: empty graph");
  const int n = g.n;
  if (n == 1) return PathState::single(0, 1);

  // reach[mask] = bitset of endpoints of simple paths covering mask
  std::vector<std::uint32_t> reach(std::size_t{1} << n, 0);
  for (int v = 0; v < n; ++v) reach[std::uint32_t{1} << v] = std::uint32_t{1} << v;
  const std::uint32_t full = (std::uint32_t{1} << n) - 1;
  for (std::uint32_t mask = 1; mask <= full; ++mask) {
    std::uint32_t ends = reach[mask];
    if (!ends) continue;
    while (ends) {
      int v = std::countr_zero(ends);
      ends &= ends - 1;
      for (int w : g.adj[v]) {
        std::uint32_t wb = std::uint32_t{1} << w;
        if (mask & wb) continue;
        reach[mask | wb] |= wb;
      }
    }
  }
  if (!reach[full]) return std::nullopt;

  std::vector<int> seq;
  std::uint32_t mask = full;
  int v = std::countr_zero(reach[full]);
  while (true) {
    seq.push_back(v);
    std::uint32_t pmask = mask ^ (std::uint32_t{1} << v);
    if (!pmask) break;
    int prev = -1;
    for (int w : g.adj[v]) {
      std::uint32_t wb = std::uint32_t{1} << w;
      if ((pmask & wb) && (reach[pmask] & wb)) {
        prev = w;
        break;
      }
    }
    mask = pmask;
    v = prev;
  }
  std::reverse(seq.begin(), seq.end());
  return PathState::from_sequence(std::move(seq), n);
}

Matching path_to_matching(const PathState& path) {
  Matching m;
  for (std::size_t i = 0; i + 1 < path.seq.size(); i += 2)
    m.edges.emplace_back(path.seq[i], path.seq[i + 1]);
  return m;
}

}  // namespace irg
