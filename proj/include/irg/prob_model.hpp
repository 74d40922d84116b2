// Edge-probability assignments and the goodness / niceness condition
// checkers.
//
// An assignment is a symmetric matrix {p(u,v)} over the complete graph,
// stored packed (upper triangle). check_good decides the two-sided
// condition
//
//     c1*r*p <= sum_{v in S} p(u,v) <= c2*r*p
//
// for every vertex u and every S of size r with ceil(alpha*n) <= r <= n-1,
// exactly: for fixed (u, r) the extremal S are the r smallest / r largest
// entries of row u, so sorted prefix sums settle the quantifier.
//
// check_nice decides the one-sided pair condition
//
//     sum_{w in S1} p(u,w) >= d1*r*p
//     (sum_{w1 in S1} p(u,w1)) * (sum_{w2 in S2} p(w2,v)) >= d2*r*p^2
//
// over disjoint S1, S2 of equal size r >= ceil(beta*n) avoiding {u,v}.
// The single-sum condition is exact. The double-sum condition uses a
// disjointness-relaxed lower bound (sound for Holds), a greedy search for
// violating witnesses (sound for Fails), an exhaustive fallback for
// n <= 14, and an honest Unknown otherwise.
//
// All condition comparisons use absolute slack 1e-12 on sums; the raw
// margin (achieved / required, or its safe reciprocal on upper bounds) is
// reported so callers can apply stricter thresholds. margin >= 1 means the
// condition holds with room to spare.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace irg {

inline constexpr double kConditionSlack = 1e-12;

class ProbabilityAssignment {
 public:
  ProbabilityAssignment() = default;
  explicit ProbabilityAssignment(int n);

  int n() const { return n_; }

  double at(int u, int v) const { return probs_[index(u, v)]; }
  void set(int u, int v, double p);

  // Sum of p(u,w) over w in set; entries with w == u are rejected.
  double row_sum_over(int u, const std::vector<int>& set) const;

  // Relabel vertices: entry (u,v) of the result equals (perm[u], perm[v])
  // of this assignment.
  ProbabilityAssignment permuted(const std::vector<int>& perm) const;

 private:
  std::size_t index(int u, int v) const;

  int n_ = 0;
  std::vector<double> probs_;  // packed strict upper triangle
};

struct GoodnessParams {
  double alpha = 0;  // in (0,1)
  double c1 = 0, c2 = 0;
  double p = 0;  // reference edge probability, in (0,1)
};

struct NicenessParams {
  double beta = 0;  // in (0,1)
  double d1 = 0, d2 = 0;
  double p = 0;
};

enum class Verdict { Holds, Fails, Unknown };

const char* to_string(Verdict v);

// Which inequality a witness violates (or nearly violates).
enum class ConditionKind { GoodLower, GoodUpper, NiceSingle, NiceDouble };

struct ConditionWitness {
  ConditionKind kind = ConditionKind::GoodLower;
  int u = -1;
  int v = -1;  // second vertex, niceness only
  int r = 0;
  std::vector<int> set1;  // S (goodness) or S1 (niceness)
  std::vector<int> set2;  // S2 (niceness double sum), else empty
  double achieved = 0;
  double required = 0;
};

struct ConditionReport {
  Verdict verdict = Verdict::Unknown;
  std::optional<ConditionWitness> witness;
  double margin = 0;  // worst achieved/required ratio over all checks
  std::string notes;
};

// ---------- assignment families ----------

struct Homogeneous {
  double p = 0;
};

struct TwoBlock {
  double p_in = 0, p_out = 0;
  int size_a = 0, size_b = 0;  // must sum to n at build time
};

struct BoundedPerturbation {
  double p = 0;
  double epsilon = 0;          // entries are p*(1 + delta), delta ~ U[-eps, eps]
  std::uint64_t seed = 0;      // family-level stream id, mixed with the build seed
};

struct WeightProduct {
  std::vector<double> weights;  // one per vertex
  double cap = 1.0;             // entries min(w_u*w_v, cap)
};

using AssignmentFamily =
    std::variant<Homogeneous, TwoBlock, BoundedPerturbation, WeightProduct>;

ProbabilityAssignment build_assignment(const AssignmentFamily& family, int n,
                                       std::uint64_t seed);

// JSON family descriptor, e.g. {"family":"homogeneous","p":0.5}.
std::string family_to_json(const AssignmentFamily& family);
AssignmentFamily family_from_json(const std::string& text);

// ---------- condition checks ----------

ConditionReport check_good(const ProbabilityAssignment& a,
                           const GoodnessParams& params);

// Tightest constants for which check_good holds at (alpha, p):
// c1_star = min over (u, r) of (sum of r smallest of row u)/(r*p),
// c2_star = max over (u, r) of (sum of r largest of row u)/(r*p).
std::pair<double, double> fit_good_constants(const ProbabilityAssignment& a,
                                             double alpha, double p);

ConditionReport check_nice(const ProbabilityAssignment& a,
                           const NicenessParams& params);

// ---------- matrix file format ----------
// First line n, then n rows of n space-separated decimals; the diagonal is
// written as 0 and ignored on read.
void save_assignment(const ProbabilityAssignment& a, const std::string& path);
ProbabilityAssignment load_assignment(const std::string& path);

}  // namespace irg
