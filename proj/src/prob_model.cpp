#include "irg/prob_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "irg/rng.hpp"
#include "json.hpp"

namespace irg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int ceil_count(double x) {
  return static_cast<int>(std::ceil(x - 1e-12));
}

void validate_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + " outside [0,1]");
  }
}

// Per-row view used by both checkers: entries of row u (excluding the
// diagonal) sorted ascending, with prefix sums and the rank of every vertex
// in that order. The r smallest entries of row u excluding vertex w are then
// prefix[r+1] - p(u,w) when rank[w] < r, else prefix[r].
struct RowStats {
  std::vector<int> order;      // vertices sorted by p(u,.) ascending, ties by label
  std::vector<double> prefix;  // prefix[i] = sum of i smallest entries
  std::vector<int> rank;       // rank[v] = position of v in order, rank[u] = -1

  double min_sum(int r) const { return prefix[r]; }
  double max_sum(int r) const {
    const int m = static_cast<int>(order.size());
    return prefix[m] - prefix[m - r];
  }
  double min_sum_excluding(const ProbabilityAssignment& a, int u, int w,
                           int r) const {
    if (rank[w] < r) return prefix[r + 1] - a.at(u, w);
    return prefix[r];
  }
};

RowStats make_row_stats(const ProbabilityAssignment& a, int u) {
  const int n = a.n();
  RowStats rs;
  rs.order.reserve(n - 1);
  for (int v = 0; v < n; ++v) {
    if (v != u) rs.order.push_back(v);
  }
  std::stable_sort(rs.order.begin(), rs.order.end(),
                   [&](int x, int y) { return a.at(u, x) < a.at(u, y); });
  rs.prefix.assign(n, 0.0);
  for (int i = 0; i < n - 1; ++i) {
    rs.prefix[i + 1] = rs.prefix[i] + a.at(u, rs.order[i]);
  }
  rs.rank.assign(n, -1);
  for (int i = 0; i < n - 1; ++i) rs.rank[rs.order[i]] = i;
  return rs;
}

// First `r` vertices of `order` that are not excluded; excluded is a flat
// bool mask over vertex labels.
std::vector<int> take_smallest(const std::vector<int>& order, int r,
                               const std::vector<char>& excluded) {
  std::vector<int> out;
  out.reserve(r);
  for (int v : order) {
    if (excluded[v]) continue;
    out.push_back(v);
    if (static_cast<int>(out.size()) == r) break;
  }
  return out;
}

}  // namespace

// ---------- ProbabilityAssignment ----------

ProbabilityAssignment::ProbabilityAssignment(int n) : n_(n) {
  if (n < 2) throw std::invalid_argument("assignment needs n >= 2");
  probs_.assign(static_cast<std::size_t>(n) * (n - 1) / 2, 0.0);
}

std::size_t ProbabilityAssignment::index(int u, int v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) {
    throw std::out_of_range("bad edge index");
  }
  if (u > v) std::swap(u, v);
  const std::size_t uu = static_cast<std::size_t>(u);
  return uu * n_ - uu * (uu + 1) / 2 + (v - u - 1);
}

void ProbabilityAssignment::set(int u, int v, double p) {
  validate_prob(p, "edge probability");
  probs_[index(u, v)] = p;
}

double ProbabilityAssignment::row_sum_over(int u,
                                           const std::vector<int>& set) const {
  double s = 0;
  for (int w : set) s += at(u, w);
  return s;
}

ProbabilityAssignment ProbabilityAssignment::permuted(
    const std::vector<int>& perm) const {
  ProbabilityAssignment out(n_);
  for (int u = 0; u < n_; ++u) {
    for (int v = u + 1; v < n_; ++v) {
      out.set(perm[u], perm[v], at(u, v));
    }
  }
  return out;
}

// ---------- families ----------

ProbabilityAssignment build_assignment(const AssignmentFamily& family, int n,
                                       std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("build_assignment needs n >= 2");
  ProbabilityAssignment a(n);

  if (const auto* hom = std::get_if<Homogeneous>(&family)) {
    validate_prob(hom->p, "homogeneous p");
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) a.set(u, v, hom->p);
  } else if (const auto* tb = std::get_if<TwoBlock>(&family)) {
    validate_prob(tb->p_in, "two-block p_in");
    validate_prob(tb->p_out, "two-block p_out");
    if (tb->size_a < 0 || tb->size_b < 0 || tb->size_a + tb->size_b != n) {
      throw std::invalid_argument("two-block sizes must sum to n");
    }
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        const bool same = (u < tb->size_a) == (v < tb->size_a);
        a.set(u, v, same ? tb->p_in : tb->p_out);
      }
    }
  } else if (const auto* bp = std::get_if<BoundedPerturbation>(&family)) {
    if (bp->epsilon < 0 || bp->epsilon > 1) {
      throw std::invalid_argument("perturbation epsilon outside [0,1]");
    }
    if (bp->p * (1 + bp->epsilon) > 1.0 || bp->p < 0) {
      throw std::invalid_argument("perturbed entries would leave [0,1]");
    }
    RngStream rng(seed, bp->seed);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        const double delta = (2.0 * rng.next_double() - 1.0) * bp->epsilon;
        a.set(u, v, bp->p * (1.0 + delta));
      }
    }
  } else if (const auto* wp = std::get_if<WeightProduct>(&family)) {
    if (static_cast<int>(wp->weights.size()) != n) {
      throw std::invalid_argument("weight vector length must equal n");
    }
    validate_prob(wp->cap, "weight-product cap");
    for (double w : wp->weights) {
      if (w < 0) throw std::invalid_argument("weights must be nonnegative");
    }
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        a.set(u, v, std::min(wp->weights[u] * wp->weights[v], wp->cap));
      }
    }
  }
  return a;
}

std::string family_to_json(const AssignmentFamily& family) {
  nlohmann::json j;
  if (const auto* hom = std::get_if<Homogeneous>(&family)) {
    j["family"] = "homogeneous";
    j["p"] = hom->p;
  } else if (const auto* tb = std::get_if<TwoBlock>(&family)) {
    j["family"] = "two_block";
    j["p_in"] = tb->p_in;
    j["p_out"] = tb->p_out;
    j["size_a"] = tb->size_a;
    j["size_b"] = tb->size_b;
  } else if (const auto* bp = std::get_if<BoundedPerturbation>(&family)) {
    j["family"] = "bounded_perturbation";
    j["p"] = bp->p;
    j["epsilon"] = bp->epsilon;
    j["seed"] = bp->seed;
  } else if (const auto* wp = std::get_if<WeightProduct>(&family)) {
    j["family"] = "weight_product";
    j["weights"] = wp->weights;
    j["cap"] = wp->cap;
  }
  return j.dump();
}

AssignmentFamily family_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("family JSON parse error: ") +
                                e.what());
  }
  if (!j.contains("family")) {
    throw std::invalid_argument("family JSON missing \"family\" tag");
  }
  const std::string tag = j.at("family").get<std::string>();
  try {
    if (tag == "homogeneous") {
      return Homogeneous{j.at("p").get<double>()};
    }
    if (tag == "two_block") {
      return TwoBlock{j.at("p_in").get<double>(), j.at("p_out").get<double>(),
                      j.at("size_a").get<int>(), j.at("size_b").get<int>()};
    }
    if (tag == "bounded_perturbation") {
      return BoundedPerturbation{j.at("p").get<double>(),
                                 j.at("epsilon").get<double>(),
                                 j.value("seed", std::uint64_t{0})};
    }
    if (tag == "weight_product") {
      return WeightProduct{j.at("weights").get<std::vector<double>>(),
                           j.value("cap", 1.0)};
    }
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("family JSON field error: ") +
                                e.what());
  }
  throw std::invalid_argument("unknown family tag: " + tag);
}

// ---------- goodness ----------

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    default: return "unknown";
  }
}

namespace {

void validate_goodness(const GoodnessParams& g) {
  if (!(g.alpha > 0 && g.alpha < 1)) throw std::invalid_argument("alpha outside (0,1)");
  if (!(g.c1 > 0 && g.c2 > 0)) throw std::invalid_argument("c1, c2 must be positive");
  if (g.c1 > g.c2) throw std::invalid_argument("c1 must not exceed c2");
  if (!(g.p > 0 && g.p < 1)) throw std::invalid_argument("p outside (0,1)");
}

void validate_niceness(const NicenessParams& q) {
  if (!(q.beta > 0 && q.beta < 1)) throw std::invalid_argument("beta outside (0,1)");
  if (!(q.d1 > 0 && q.d2 > 0)) throw std::invalid_argument("d1, d2 must be positive");
  if (!(q.p > 0 && q.p < 1)) throw std::invalid_argument("p outside (0,1)");
}

}  // namespace

ConditionReport check_good(const ProbabilityAssignment& a,
                           const GoodnessParams& params) {
  validate_goodness(params);
  const int n = a.n();
  const int r_min = std::max(1, ceil_count(params.alpha * n));
  ConditionReport rep;
  if (r_min > n - 1) {
    rep.verdict = Verdict::Holds;
    rep.margin = kInf;
    rep.notes = "no admissible set size (ceil(alpha*n) > n-1); vacuously holds";
    return rep;
  }

  double margin = kInf;
  for (int u = 0; u < n; ++u) {
    const RowStats rs = make_row_stats(a, u);
    for (int r = r_min; r <= n - 1; ++r) {
      const double lo = rs.min_sum(r);
      const double hi = rs.max_sum(r);
      const double need_lo = params.c1 * r * params.p;
      const double need_hi = params.c2 * r * params.p;
      margin = std::min(margin, lo / need_lo);
      margin = std::min(margin, hi > 0 ? need_hi / hi : kInf);
      if (lo < need_lo - kConditionSlack) {
        ConditionWitness w;
        w.kind = ConditionKind::GoodLower;
        w.u = u;
        w.r = r;
        w.set1.assign(rs.order.begin(), rs.order.begin() + r);
        std::sort(w.set1.begin(), w.set1.end());
        w.achieved = lo;
        w.required = need_lo;
        rep.verdict = Verdict::Fails;
        rep.witness = std::move(w);
        rep.margin = lo / need_lo;
        return rep;
      }
      if (hi > need_hi + kConditionSlack) {
        ConditionWitness w;
        w.kind = ConditionKind::GoodUpper;
        w.u = u;
        w.r = r;
        w.set1.assign(rs.order.end() - r, rs.order.end());
        std::sort(w.set1.begin(), w.set1.end());
        w.achieved = hi;
        w.required = need_hi;
        rep.verdict = Verdict::Fails;
        rep.witness = std::move(w);
        rep.margin = need_hi / hi;
        return rep;
      }
    }
  }
  rep.verdict = Verdict::Holds;
  rep.margin = margin;
  return rep;
}

std::pair<double, double> fit_good_constants(const ProbabilityAssignment& a,
                                             double alpha, double p) {
  if (!(p > 0)) throw std::invalid_argument("fit_good_constants needs p > 0");
  if (!(alpha > 0 && alpha < 1)) throw std::invalid_argument("alpha outside (0,1)");
  const int n = a.n();
  const int r_min = std::max(1, ceil_count(alpha * n));
  if (r_min > n - 1) {
    throw std::invalid_argument("no admissible set size for fit_good_constants");
  }
  double c1_star = kInf;
  double c2_star = 0;
  for (int u = 0; u < n; ++u) {
    const RowStats rs = make_row_stats(a, u);
    for (int r = r_min; r <= n - 1; ++r) {
      c1_star = std::min(c1_star, rs.min_sum(r) / (r * p));
      c2_star = std::max(c2_star, rs.max_sum(r) / (r * p));
    }
  }
  return {c1_star, c2_star};
}

// ---------- niceness ----------

namespace {

struct PairTriple {
  int u, v, r;
  double relaxed_ratio;
};

// Exact minimum of (sum_{S1} f)(sum_{S2} g) over disjoint S1, S2 of size r
// drawn from the candidates (all vertices except u, v). Enumerates S1 and
// takes the g-smallest r vertices outside S1. Only used for small n.
struct ExactPairMin {
  double value = kInf;
  std::vector<int> set1, set2;
};

ExactPairMin exact_pair_min(const ProbabilityAssignment& a, int u, int v,
                            int r, const RowStats& row_u,
                            const RowStats& row_v) {
  const int n = a.n();
  std::vector<int> cand;
  cand.reserve(n - 2);
  for (int w = 0; w < n; ++w) {
    if (w != u && w != v) cand.push_back(w);
  }
  const int m = static_cast<int>(cand.size());
  std::vector<int> pick(r);
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<char> in_s1(n, 0);
  ExactPairMin best;
  while (true) {
    double f_sum = 0;
    for (int i : pick) f_sum += a.at(u, cand[i]);
    for (int i : pick) in_s1[cand[i]] = 1;
    in_s1[u] = in_s1[v] = 1;
    double g_sum = 0;
    int taken = 0;
    std::vector<int> s2;
    s2.reserve(r);
    for (int w : row_v.order) {
      if (in_s1[w]) continue;
      g_sum += a.at(v, w);
      s2.push_back(w);
      if (++taken == r) break;
    }
    for (int i : pick) in_s1[cand[i]] = 0;
    in_s1[u] = in_s1[v] = 0;
    const double prod = f_sum * g_sum;
    if (prod < best.value) {
      best.value = prod;
      best.set1.clear();
      for (int i : pick) best.set1.push_back(cand[i]);
      best.set2 = std::move(s2);
    }
    // next combination
    int i = r - 1;
    while (i >= 0 && pick[i] == m - r + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < r; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(best.set1.begin(), best.set1.end());
  std::sort(best.set2.begin(), best.set2.end());
  (void)row_u;
  return best;
}

}  // namespace

ConditionReport check_nice(const ProbabilityAssignment& a,
                           const NicenessParams& params) {
  validate_niceness(params);
  const int n = a.n();
  const int r_min = std::max(1, ceil_count(params.beta * n));
  const int r_max = (n - 2) / 2;  // both disjoint sets must fit beside u, v
  if (2 * r_min > n - 2) {
    throw std::invalid_argument(
        "check_nice needs 2*ceil(beta*n) <= n-2 so that disjoint pairs exist");
  }

  std::vector<RowStats> rows;
  rows.reserve(n);
  for (int u = 0; u < n; ++u) rows.push_back(make_row_stats(a, u));

  ConditionReport rep;
  double margin = kInf;
  std::vector<PairTriple> unresolved;
  std::vector<char> mask(n, 0);

  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (v == u) continue;
      const RowStats& ru = rows[u];
      const RowStats& rv = rows[v];
      for (int r = r_min; r <= r_max; ++r) {
        // single-sum condition, exact
        const double f_min = ru.min_sum_excluding(a, u, v, r);
        const double need1 = params.d1 * r * params.p;
        margin = std::min(margin, f_min / need1);
        if (f_min < need1 - kConditionSlack) {
          ConditionWitness w;
          w.kind = ConditionKind::NiceSingle;
          w.u = u;
          w.v = v;
          w.r = r;
          mask.assign(n, 0);
          mask[u] = mask[v] = 1;
          w.set1 = take_smallest(ru.order, r, mask);
          for (int x : w.set1) mask[x] = 1;
          w.set2 = take_smallest(rv.order, r, mask);  // any disjoint partner set
          std::sort(w.set1.begin(), w.set1.end());
          std::sort(w.set2.begin(), w.set2.end());
          w.achieved = f_min;
          w.required = need1;
          rep.verdict = Verdict::Fails;
          rep.witness = std::move(w);
          rep.margin = f_min / need1;
          return rep;
        }

        // double-sum condition: disjointness-relaxed lower bound first
        const double g_min = rv.min_sum_excluding(a, v, u, r);
        const double need2 = params.d2 * r * params.p * params.p;
        const double relaxed = f_min * g_min;
        if (relaxed >= need2 - kConditionSlack) {
          margin = std::min(margin, relaxed / need2);
          continue;
        }

        // relaxation failed: hunt for a real disjoint violating pair
        ConditionWitness w;
        w.kind = ConditionKind::NiceDouble;
        w.u = u;
        w.v = v;
        w.r = r;
        double best_prod = kInf;
        for (int lead = 0; lead < 2; ++lead) {
          mask.assign(n, 0);
          mask[u] = mask[v] = 1;
          std::vector<int> s1, s2;
          if (lead == 0) {
            s1 = take_smallest(ru.order, r, mask);
            for (int x : s1) mask[x] = 1;
            s2 = take_smallest(rv.order, r, mask);
          } else {
            s2 = take_smallest(rv.order, r, mask);
            for (int x : s2) mask[x] = 1;
            s1 = take_smallest(ru.order, r, mask);
          }
          const double prod = a.row_sum_over(u, s1) * a.row_sum_over(v, s2);
          if (prod < best_prod) {
            best_prod = prod;
            w.set1 = std::move(s1);
            w.set2 = std::move(s2);
          }
        }
        if (best_prod < need2 - kConditionSlack) {
          std::sort(w.set1.begin(), w.set1.end());
          std::sort(w.set2.begin(), w.set2.end());
          w.achieved = best_prod;
          w.required = need2;
          rep.verdict = Verdict::Fails;
          rep.witness = std::move(w);
          rep.margin = best_prod / need2;
          return rep;
        }
        margin = std::min(margin, relaxed / need2);
        unresolved.push_back({u, v, r, relaxed / need2});
      }
    }
  }

  if (unresolved.empty()) {
    rep.verdict = Verdict::Holds;
    rep.margin = margin;
    return rep;
  }

  if (n <= 14) {
    // exhaustive fallback: exact on every unresolved triple
    for (const PairTriple& t : unresolved) {
      const ExactPairMin em =
          exact_pair_min(a, t.u, t.v, t.r, rows[t.u], rows[t.v]);
      const double need2 = params.d2 * t.r * params.p * params.p;
      margin = std::min(margin, em.value / need2);
      if (em.value < need2 - kConditionSlack) {
        ConditionWitness w;
        w.kind = ConditionKind::NiceDouble;
        w.u = t.u;
        w.v = t.v;
        w.r = t.r;
        w.set1 = em.set1;
        w.set2 = em.set2;
        w.achieved = em.value;
        w.required = need2;
        rep.verdict = Verdict::Fails;
        rep.witness = std::move(w);
        rep.margin = em.value / need2;
        return rep;
      }
    }
    rep.verdict = Verdict::Holds;
    rep.margin = margin;
    rep.notes = "double-sum condition settled by exhaustive enumeration on " +
                std::to_string(unresolved.size()) + " (u,v,r) triples";
    return rep;
  }

  rep.verdict = Verdict::Unknown;
  rep.margin = margin;
  rep.notes = std::to_string(unresolved.size()) +
              " (u,v,r) triples unresolved: relaxed bound below threshold, no "
              "greedy violating pair, n too large for exhaustive enumeration";
  return rep;
}

// ---------- matrix file I/O ----------

void save_assignment(const ProbabilityAssignment& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  const int n = a.n();
  out << n << "\n";
  out << std::setprecision(17);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (v) out << ' ';
      out << (u == v ? 0.0 : a.at(u, v));
    }
    out << "\n";
  }
}

ProbabilityAssignment load_assignment(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  int n = 0;
  if (!(in >> n) || n < 2) {
    throw std::runtime_error("bad assignment file header in " + path);
  }
  ProbabilityAssignment a(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      double x;
      if (!(in >> x)) throw std::runtime_error("truncated assignment file " + path);
      if (u < v) {
        a.set(u, v, x);
      } else if (u > v && std::abs(a.at(u, v) - x) > 1e-9) {
        throw std::runtime_error("asymmetric assignment file " + path);
      }
    }
  }
  return a;
}

}  // namespace irg
