// Channel assignment through threshold fading: sample gains, keep pairs
// with gain strictly above lambda, and match users to channels in the
// induced bipartite graph (users 0..n-1, channels n..2n-1).
//
// Gain distributions are restricted to closed-form survival functions so
// the induced edge probabilities are exact. PerPairTable is the extension
// point for heterogeneous links.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "irg/matching.hpp"
#include "irg/prob_model.hpp"
#include "irg/rng.hpp"
#include "irg/stats.hpp"

namespace irg {

struct ExponentialGain {
  double rate = 1.0;
};

struct UniformGain {
  double lo = 0.0, hi = 1.0;
};

using GainDist = std::variant<ExponentialGain, UniformGain>;

// n x n user-major table of per-link distributions.
struct PerPairTable {
  int n = 0;
  std::vector<GainDist> cells;
};

using FadingModel = std::variant<ExponentialGain, UniformGain, PerPairTable>;

struct ChannelScenario {
  int n = 1;
  FadingModel fading = ExponentialGain{};
  double lambda = 0.0;
};

double survival(const GainDist& dist, double lambda);  // P(Z > lambda)
double sample_gain(const GainDist& dist, RngStream& rng);

// Bipartite assignment on 2n vertices; entry (u, n+v) = P(Z_{u,v} > lambda),
// same-side entries 0.
ProbabilityAssignment gains_to_probabilities(const FadingModel& fading,
                                             double lambda, int n);

struct AssignmentResult {
  bool success = false;            // every user matched
  int matched_count = 0;
  std::vector<int> channel_of;     // per user; -1 when unmatched
  double min_matched_gain = 0;     // +inf when nothing matched
};

// Draws the full gain matrix in user-major order (one draw per pair even
// when an edge is already decided), thresholds strictly, and matches.
AssignmentResult simulate_assignment(const ChannelScenario& sc, RngStream rng);

struct SuccessEstimate {
  int trials = 0;
  int successes = 0;
  double estimate = 0;
  double wilson_lo = 0, wilson_hi = 1;
};

// Independent trials on substreams of master_seed.
SuccessEstimate success_probability(const ChannelScenario& sc, int trials,
                                    std::uint64_t master_seed);

// JSON: {"n":..., "fading":{"kind":...}, "lambda":...}.
std::string scenario_to_json(const ChannelScenario& sc);
ChannelScenario scenario_from_json(const std::string& text);

// The "fading" object alone, e.g. {"kind":"exponential","rate":1.0}.
std::string fading_to_json(const FadingModel& fading);
FadingModel fading_from_json(const std::string& text);

}  // namespace irg
