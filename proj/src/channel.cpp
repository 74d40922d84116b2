#include "irg/channel.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"

#include "irg/sampler.hpp"

namespace irg {

namespace {

void validate_dist(const GainDist& dist) {
  if (const auto* e = std::get_if<ExponentialGain>(&dist)) {
    if (!(e->rate > 0))
      throw std::invalid_argument("exponential gain: rate must be positive");
  } else {
    const auto& u = std::get<UniformGain>(dist);
    if (!(u.lo >= 0) || !(u.hi > u.lo))
      throw std::invalid_argument("uniform gain: need 0 <= lo < hi");
  }
}

// The (u,v) link distribution; uniform models share one cell.
const GainDist& link_dist(const FadingModel& fading, const GainDist& shared,
                          int n, int u, int v) {
  if (const auto* t = std::get_if<PerPairTable>(&fading))
    return t->cells[static_cast<std::size_t>(u) * n + v];
  return shared;
}

GainDist shared_dist(const FadingModel& fading) {
  if (const auto* e = std::get_if<ExponentialGain>(&fading)) return *e;
  if (const auto* u = std::get_if<UniformGain>(&fading)) return *u;
  return ExponentialGain{};  // unused for PerPairTable
}

void validate_model(const FadingModel& fading, int n) {
  if (const auto* t = std::get_if<PerPairTable>(&fading)) {
    if (t->n != n)
      throw std::invalid_argument("per-pair table size disagrees with n");
    if (t->cells.size() != static_cast<std::size_t>(n) * n)
      throw std::invalid_argument("per-pair table has wrong cell count");
    for (const auto& c : t->cells) validate_dist(c);
  } else {
    validate_dist(shared_dist(fading));
  }
}

}  // namespace

double survival(const GainDist& dist, double lambda) {
  if (lambda < 0) throw std::invalid_argument("survival: lambda must be >= 0");
  if (const auto* e = std::get_if<ExponentialGain>(&dist))
    return std::exp(-e->rate * lambda);
  const auto& u = std::get<UniformGain>(dist);
  if (lambda <= u.lo) return 1.0;
  if (lambda >= u.hi) return 0.0;
  return (u.hi - lambda) / (u.hi - u.lo);
}

double sample_gain(const GainDist& dist, RngStream& rng) {
  double x = rng.next_double();        // in [0,1)
  if (x <= 0) x = 0x1.0p-53;           // gains are strictly positive
  if (const auto* e = std::get_if<ExponentialGain>(&dist))
    return -std::log1p(-x) / e->rate;
  const auto& u = std::get<UniformGain>(dist);
  return u.lo + x * (u.hi - u.lo);
}

ProbabilityAssignment gains_to_probabilities(const FadingModel& fading,
                                             double lambda, int n) {
  if (n < 1) throw std::invalid_argument("gains_to_probabilities: n must be >= 1");
  if (lambda < 0)
    throw std::invalid_argument("gains_to_probabilities: lambda must be >= 0");
  validate_model(fading, n);
  const GainDist shared = shared_dist(fading);
  ProbabilityAssignment a(2 * n);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      a.set(u, n + v, survival(link_dist(fading, shared, n, u, v), lambda));
  return a;
}

AssignmentResult simulate_assignment(const ChannelScenario& sc,
                                     RngStream rng) {
  const int n = sc.n;
  if (n < 1) throw std::invalid_argument("simulate_assignment: n must be >= 1");
  if (sc.lambda < 0)
    throw std::invalid_argument("simulate_assignment: lambda must be >= 0");
  validate_model(sc.fading, n);
  const GainDist shared = shared_dist(sc.fading);

  std::vector<double> gain(static_cast<std::size_t>(n) * n);
  SampledGraph g;
  g.n = 2 * n;
  g.adj.assign(g.n, {});
  Bipartition split;
  for (int u = 0; u < n; ++u) split.left.push_back(u);
  for (int v = 0; v < n; ++v) split.right.push_back(n + v);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      const double z = sample_gain(link_dist(sc.fading, shared, n, u, v), rng);
      gain[static_cast<std::size_t>(u) * n + v] = z;
      if (z > sc.lambda) {
        g.adj[u].push_back(n + v);
        g.adj[n + v].push_back(u);
        ++g.edge_count;
      }
    }
  }
  g.bipartition = std::move(split);

  Matching m = maximum_matching(g);
  AssignmentResult res;
  res.matched_count = m.size();
  res.success = (m.size() == n);
  res.channel_of.assign(n, -1);
  res.min_matched_gain = std::numeric_limits<double>::infinity();
  for (const auto& [u, y] : m.edges) {
    const int v = y - n;
    res.channel_of[u] = v;
    const double z = gain[static_cast<std::size_t>(u) * n + v];
    if (z < res.min_matched_gain) res.min_matched_gain = z;
  }
  return res;
}

SuccessEstimate success_probability(const ChannelScenario& sc, int trials,
                                    std::uint64_t master_seed) {
  if (trials < 1)
    throw std::invalid_argument("success_probability: trials must be >= 1");
  RngStream base(master_seed);
  SuccessEstimate est;
  est.trials = trials;
  for (int t = 0; t < trials; ++t) {
    AssignmentResult r =
        simulate_assignment(sc, base.substream(static_cast<std::uint64_t>(t)));
    if (r.success) ++est.successes;
  }
  est.estimate = static_cast<double>(est.successes) / trials;
  auto w = wilson_interval(est.successes, trials);
  est.wilson_lo = w.lo;
  est.wilson_hi = w.hi;
  return est;
}

namespace {

using nlohmann::json;

json dist_to_json(const GainDist& d) {
  if (const auto* e = std::get_if<ExponentialGain>(&d))
    return json{{"kind", "exponential"}, {"rate", e->rate}};
  const auto& u = std::get<UniformGain>(d);
  return json{{"kind", "uniform"}, {"lo", u.lo}, {"hi", u.hi}};
}

GainDist dist_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "exponential")
    return ExponentialGain{j.at("rate").get<double>()};
  if (kind == "uniform")
    return UniformGain{j.at("lo").get<double>(), j.at("hi").get<double>()};
  throw std::invalid_argument("unknown gain distribution kind: " + kind);
}

}  // namespace

namespace {

json fading_json(const FadingModel& fading) {
  if (const auto* t = std::get_if<PerPairTable>(&fading)) {
    json cells = json::array();
    for (const auto& c : t->cells) cells.push_back(dist_to_json(c));
    return json{{"kind", "per_pair"}, {"n", t->n}, {"cells", cells}};
  }
  if (const auto* e = std::get_if<ExponentialGain>(&fading))
    return dist_to_json(*e);
  return dist_to_json(std::get<UniformGain>(fading));
}

FadingModel fading_parse(const json& f) {
  const std::string kind = f.at("kind").get<std::string>();
  if (kind == "per_pair") {
    PerPairTable t;
    t.n = f.at("n").get<int>();
    for (const auto& c : f.at("cells")) t.cells.push_back(dist_from_json(c));
    return t;
  }
  GainDist d = dist_from_json(f);
  if (const auto* e = std::get_if<ExponentialGain>(&d)) return *e;
  return std::get<UniformGain>(d);
}

}  // namespace

std::string fading_to_json(const FadingModel& fading) {
  return fading_json(fading).dump(2);
}

FadingModel fading_from_json(const std::string& text) {
  return fading_parse(json::parse(text));
}

std::string scenario_to_json(const ChannelScenario& sc) {
  json j{{"n", sc.n}, {"fading", fading_json(sc.fading)}, {"lambda", sc.lambda}};
  return j.dump(2);
}

ChannelScenario scenario_from_json(const std::string& text) {
  json j = json::parse(text);
  ChannelScenario sc;
  sc.n = j.at("n").get<int>();
  sc.lambda = j.at("lambda").get<double>();
  sc.fading = fading_parse(j.at("fading"));
  return sc;
}

}  // namespace irg
