#include "irg/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "irg/bounds.hpp"
#include "irg/hamilton.hpp"
#include "irg/matching.hpp"
#include "irg/rng.hpp"
#include "irg/sampler.hpp"
#include "irg/stats.hpp"

namespace irg {

using nlohmann::json;

std::string fmt_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  (void)ec;
  return std::string(buf, ptr);
}

double PRule::value(int n) const {
  switch (kind) {
    case Kind::Fixed:
      return p;
    case Kind::Power:
      return C * std::pow(static_cast<double>(n),
                          -static_cast<double>(k) / (k + 1.0));
    case Kind::LogOverSqrt:
      return std::log(static_cast<double>(n)) /
             std::sqrt(static_cast<double>(n));
  }
  return p;
}

double cell_p(const ExperimentConfig& cfg, int n) {
  if (cfg.family)
    if (const auto* h = std::get_if<Homogeneous>(&*cfg.family)) return h->p;
  return cfg.p_rule.value(n);
}

namespace {

constexpr std::uint64_t kBuildTag = 0xb11dULL;

// Worker pool over [0, total); stores the first exception and rethrows it
// after join so results never silently vanish.
template <class F>
void parallel_for(int total, int threads, F&& f) {
  threads = std::max(1, std::min(threads, total));
  if (threads <= 1) {
    for (int i = 0; i < total; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

std::string csv_bool(bool b) { return b ? "1" : "0"; }

AssignmentFamily effective_family(const ExperimentConfig& cfg, int n) {
  if (cfg.family) return *cfg.family;
  return Homogeneous{cell_p(cfg, n)};
}

ProbabilityAssignment build_cell_assignment(const ExperimentConfig& cfg,
                                            int ci, int n) {
  return build_assignment(effective_family(cfg, n), n,
                          mix64(cfg.master_seed, kBuildTag,
                                static_cast<std::uint64_t>(ci)));
}

RngStream trial_stream(const ExperimentConfig& cfg, int ci, int t) {
  return RngStream(cfg.master_seed, mix64(static_cast<std::uint64_t>(ci),
                                          static_cast<std::uint64_t>(t)));
}

std::uint64_t trial_seed(int ci, int t) {
  return mix64(static_cast<std::uint64_t>(ci), static_cast<std::uint64_t>(t));
}

struct KindOutput {
  std::string header;
  std::vector<std::string> lines;
  json cells = json::array();
};

// ---------- ham_frequency ----------

KindOutput run_ham(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  const int T = cfg.trials;
  std::vector<ProbabilityAssignment> assignments;
  assignments.reserve(C);
  for (int ci = 0; ci < C; ++ci)
    assignments.push_back(build_cell_assignment(cfg, ci, cfg.n_list[ci]));

  struct R {
    int path_len = 0;
    bool ham = false;
    int rotations = 0, restarts = 0;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    RngStream trial = trial_stream(cfg, ci, t);
    SampledGraph g = sample_graph(assignments[ci], trial.substream(0));
    SearchResult sr = longest_path_search(
        g, SearchBudget{cfg.max_rotations, cfg.max_restarts,
                        trial.substream(1)});
    res[i] = {sr.path.length(), sr.path.t() == g.n, sr.rotations_used,
              sr.restarts_used};
  });

  KindOutput out;
  out.header =
      "n,trial,seed,path_length,hamiltonian,rotations_used,restarts_used";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    int hits = 0;
    long long len_sum = 0;
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      hits += r.ham ? 1 : 0;
      len_sum += r.path_len;
      out.lines.push_back(std::to_string(n) + "," + std::to_string(t) + "," +
                          std::to_string(trial_seed(ci, t)) + "," +
                          std::to_string(r.path_len) + "," + csv_bool(r.ham) +
                          "," + std::to_string(r.rotations) + "," +
                          std::to_string(r.restarts));
    }
    auto w = wilson_interval(hits, T);
    out.cells.push_back(json{{"n", n},
                             {"p", cell_p(cfg, n)},
                             {"trials", T},
                             {"frequency", static_cast<double>(hits) / T},
                             {"wilson_lo", w.lo},
                             {"wilson_hi", w.hi},
                             {"mean_path_length",
                              static_cast<double>(len_sum) / T}});
  }
  return out;
}

// ---------- per_frequency ----------

KindOutput run_per(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  const int T = cfg.trials;
  std::vector<ProbabilityAssignment> assignments;
  assignments.reserve(C);
  for (int ci = 0; ci < C; ++ci)
    assignments.push_back(build_cell_assignment(cfg, ci, cfg.n_list[ci]));

  struct R {
    int size = 0;
    bool low_ok = false, perfect = false;
    int probed = 0, applied = 0;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    const int n = cfg.n_list[ci];
    const int z = n / 4;
    Bipartition split;
    const int left_size = (n + 1) / 2;
    for (int v = 0; v < left_size; ++v) split.left.push_back(v);
    for (int v = left_size; v < n; ++v) split.right.push_back(v);

    RngStream trial = trial_stream(cfg, ci, t);
    SampledGraph g =
        sample_bipartite(assignments[ci], split, trial.substream(0));
    Matching m = maximum_matching(g);
    R r;
    r.size = m.size();
    r.low_ok = m.size() >= z;
    r.perfect = is_perfect(m, n);

    RngStream probe = trial.substream(2);
    std::vector<char> cov(n, 0);
    for (const auto& [a, b] : m.edges) cov[a] = cov[b] = 1;
    std::vector<int> fl, fr;
    for (int v : split.left)
      if (!cov[v]) fl.push_back(v);
    for (int v : split.right)
      if (!cov[v]) fr.push_back(v);
    if (!fl.empty() && !fr.empty()) {
      for (int k = 0; k < cfg.probes; ++k) {
        int w = fl[probe.next_int(static_cast<int>(fl.size()))];
        int v = fr[probe.next_int(static_cast<int>(fr.size()))];
        ++r.probed;
        if (augment_with_pair(m, g, w, v)) ++r.applied;
      }
    }
    res[i] = r;
  });

  KindOutput out;
  out.header =
      "n,trial,seed,matching_size,z,low_ok,perfect,pairs_sampled,"
      "augment_applied";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    const int z = n / 4;
    int perfect_hits = 0, low_hits = 0, applied = 0;
    long long size_sum = 0;
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      perfect_hits += r.perfect ? 1 : 0;
      low_hits += r.low_ok ? 1 : 0;
      applied += r.applied;
      size_sum += r.size;
      out.lines.push_back(std::to_string(n) + "," + std::to_string(t) + "," +
                          std::to_string(trial_seed(ci, t)) + "," +
                          std::to_string(r.size) + "," + std::to_string(z) +
                          "," + csv_bool(r.low_ok) + "," +
                          csv_bool(r.perfect) + "," +
                          std::to_string(r.probed) + "," +
                          std::to_string(r.applied));
    }
    auto wp = wilson_interval(perfect_hits, T);
    auto wl = wilson_interval(low_hits, T);
    out.cells.push_back(
        json{{"n", n},
             {"p", cell_p(cfg, n)},
             {"z", z},
             {"trials", T},
             {"frequency", static_cast<double>(perfect_hits) / T},
             {"wilson_lo", wp.lo},
             {"wilson_hi", wp.hi},
             {"freq_low", static_cast<double>(low_hits) / T},
             {"low_wilson_lo", wl.lo},
             {"low_wilson_hi", wl.hi},
             {"mean_matching_size", static_cast<double>(size_sum) / T},
             {"augments_applied", applied}});
  }
  return out;
}

// ---------- expansion ----------

KindOutput run_expansion(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  std::vector<ProbabilityAssignment> assignments;
  assignments.reserve(C);
  for (int ci = 0; ci < C; ++ci)
    assignments.push_back(build_cell_assignment(cfg, ci, cfg.n_list[ci]));

  std::vector<std::vector<ExpansionRow>> rows(C);
  parallel_for(C, cfg.threads, [&](int ci) {
    ExpansionConfig ec;
    ec.sizes = cfg.sizes;
    ec.trials_per_size = cfg.trials;
    ec.c1 = cfg.c1;
    ec.c2 = cfg.c2;
    ec.p = cell_p(cfg, cfg.n_list[ci]);
    rows[ci] = expansion_statistics(assignments[ci], ec,
                                    trial_stream(cfg, ci, 0));
  });

  KindOutput out;
  out.header =
      "n,s,trials,fraction_in_interval,predicted_lo,predicted_hi,"
      "observed_min,observed_median,observed_max,regime_ok";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    json jrows = json::array();
    double min_fraction = 1.0;
    for (const ExpansionRow& r : rows[ci]) {
      min_fraction = std::min(min_fraction, r.fraction_in_interval);
      out.lines.push_back(
          std::to_string(n) + "," + std::to_string(r.s) + "," +
          std::to_string(r.trials) + "," + fmt_double(r.fraction_in_interval) +
          "," + fmt_double(r.predicted_lo) + "," + fmt_double(r.predicted_hi) +
          "," + std::to_string(r.observed_min) + "," +
          std::to_string(r.observed_median) + "," +
          std::to_string(r.observed_max) + "," + csv_bool(r.regime_ok));
      jrows.push_back(json{{"s", r.s},
                           {"fraction_in_interval", r.fraction_in_interval},
                           {"predicted_lo", r.predicted_lo},
                           {"predicted_hi", r.predicted_hi},
                           {"observed_min", r.observed_min},
                           {"observed_median", r.observed_median},
                           {"observed_max", r.observed_max},
                           {"regime_ok", r.regime_ok}});
    }
    out.cells.push_back(json{{"n", n},
                             {"p", cell_p(cfg, n)},
                             {"trials", cfg.trials},
                             {"frequency", min_fraction},
                             {"rows", jrows}});
  }
  return out;
}

// ---------- pivots ----------

KindOutput run_pivots(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  const int T = cfg.trials;
  const int K = cfg.generations;
  std::vector<ProbabilityAssignment> assignments;
  assignments.reserve(C);
  for (int ci = 0; ci < C; ++ci)
    assignments.push_back(build_cell_assignment(cfg, ci, cfg.n_list[ci]));

  struct R {
    int path_len = 0;
    std::vector<int> counts;
    bool in_interval = false, growth = false;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    const int n = cfg.n_list[ci];
    RngStream trial = trial_stream(cfg, ci, t);
    SampledGraph g = sample_graph(assignments[ci], trial.substream(0));
    SearchResult sr = longest_path_search(
        g, SearchBudget{cfg.max_rotations, cfg.max_restarts,
                        trial.substream(1)});
    PivotGenerations pg = pivot_generations(g, sr.path, K);
    R r;
    r.path_len = sr.path.length();
    for (const auto& gen : pg.generations)
      r.counts.push_back(static_cast<int>(gen.size()));
    IntervalReport iv = pivot_interval(n, cell_p(cfg, n), 1, cfg.c1, cfg.c2);
    r.in_interval = r.counts[0] >= iv.lo - 1e-9 && r.counts[0] <= iv.hi + 1e-9;
    r.growth = K < 2 || r.counts[1] >= r.counts[0];
    res[i] = r;
  });

  KindOutput out;
  out.header = "n,trial,seed,path_length";
  for (int l = 1; l <= K; ++l) out.header += ",p" + std::to_string(l);
  out.header += ",p1_in_interval";
  if (K >= 2) out.header += ",growth_ok";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    IntervalReport iv = pivot_interval(n, cell_p(cfg, n), 1, cfg.c1, cfg.c2);
    int in_hits = 0, growth_hits = 0;
    std::vector<long long> count_sum(K, 0);
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      in_hits += r.in_interval ? 1 : 0;
      growth_hits += r.growth ? 1 : 0;
      std::string line = std::to_string(n) + "," + std::to_string(t) + "," +
                         std::to_string(trial_seed(ci, t)) + "," +
                         std::to_string(r.path_len);
      for (int l = 0; l < K; ++l) {
        line += "," + std::to_string(r.counts[l]);
        count_sum[l] += r.counts[l];
      }
      line += "," + csv_bool(r.in_interval);
      if (K >= 2) line += "," + csv_bool(r.growth);
      out.lines.push_back(std::move(line));
    }
    auto wi = wilson_interval(in_hits, T);
    auto wg = wilson_interval(growth_hits, T);
    json means = json::array();
    for (int l = 0; l < K; ++l)
      means.push_back(static_cast<double>(count_sum[l]) / T);
    out.cells.push_back(
        json{{"n", n},
             {"p", cell_p(cfg, n)},
             {"trials", T},
             {"frequency", static_cast<double>(in_hits) / T},
             {"wilson_lo", wi.lo},
             {"wilson_hi", wi.hi},
             {"growth_frequency", static_cast<double>(growth_hits) / T},
             {"growth_wilson_lo", wg.lo},
             {"growth_wilson_hi", wg.hi},
             {"interval_lo", iv.lo},
             {"interval_hi", iv.hi},
             {"mean_counts", means}});
  }
  return out;
}

// ---------- exclusion ----------

KindOutput run_exclusion(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  const int T = cfg.trials;
  std::vector<ProbabilityAssignment> assignments;
  assignments.reserve(C);
  for (int ci = 0; ci < C; ++ci)
    assignments.push_back(build_cell_assignment(cfg, ci, cfg.n_list[ci]));

  struct R {
    int j = -1;
    int path_len = 0, total_pivots = 0, rotations = 0;
    bool adjacent = false;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    const int n = cfg.n_list[ci];
    RngStream trial = trial_stream(cfg, ci, t);
    SampledGraph g = sample_graph(assignments[ci], trial.substream(0));
    int j = trial.substream(2).next_int(n);
    ExclusionReport rep = exclusion_experiment(
        g, j,
        SearchBudget{cfg.max_rotations, cfg.max_restarts, trial.substream(1)},
        cfg.generations);
    res[i] = {rep.j, rep.path_length, rep.total_pivots, rep.rotations_used,
              rep.adjacent_to_pivot};
  });

  KindOutput out;
  out.header =
      "n,trial,seed,j,path_length,total_pivots,adjacent_to_pivot,"
      "rotations_used";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    int adj_hits = 0;
    long long len_sum = 0, piv_sum = 0;
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      adj_hits += r.adjacent ? 1 : 0;
      len_sum += r.path_len;
      piv_sum += r.total_pivots;
      out.lines.push_back(std::to_string(n) + "," + std::to_string(t) + "," +
                          std::to_string(trial_seed(ci, t)) + "," +
                          std::to_string(r.j) + "," +
                          std::to_string(r.path_len) + "," +
                          std::to_string(r.total_pivots) + "," +
                          csv_bool(r.adjacent) + "," +
                          std::to_string(r.rotations));
    }
    auto w = wilson_interval(adj_hits, T);
    out.cells.push_back(
        json{{"n", n},
             {"p", cell_p(cfg, n)},
             {"trials", T},
             {"frequency", static_cast<double>(adj_hits) / T},
             {"wilson_lo", w.lo},
             {"wilson_hi", w.hi},
             {"mean_path_length", static_cast<double>(len_sum) / T},
             {"mean_total_pivots", static_cast<double>(piv_sum) / T}});
  }
  return out;
}

// ---------- channel ----------

KindOutput run_channel(const ExperimentConfig& cfg) {
  struct Cell {
    int n;
    double lambda;
  };
  std::vector<Cell> cells;
  for (int n : cfg.n_list) {
    if (!cfg.lambdas.empty()) {
      for (double lam : cfg.lambdas) cells.push_back({n, lam});
    } else {
      cells.push_back({n, std::log(std::sqrt(static_cast<double>(n)) /
                                   std::log(static_cast<double>(n)))});
    }
  }
  const int C = static_cast<int>(cells.size());
  const int T = cfg.trials;

  struct R {
    bool success = false;
    int matched = 0;
    double min_gain = 0;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    ChannelScenario sc{cells[ci].n, cfg.fading, cells[ci].lambda};
    RngStream trial = trial_stream(cfg, ci, t);
    AssignmentResult ar = simulate_assignment(sc, trial.substream(0));
    res[i] = {ar.success, ar.matched_count, ar.min_matched_gain};
  });

  KindOutput out;
  out.header = "n,lambda,trial,seed,success,matched_count,min_matched_gain";
  for (int ci = 0; ci < C; ++ci) {
    int hits = 0;
    long long matched_sum = 0;
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      hits += r.success ? 1 : 0;
      matched_sum += r.matched;
      out.lines.push_back(std::to_string(cells[ci].n) + "," +
                          fmt_double(cells[ci].lambda) + "," +
                          std::to_string(t) + "," +
                          std::to_string(trial_seed(ci, t)) + "," +
                          csv_bool(r.success) + "," +
                          std::to_string(r.matched) + "," +
                          fmt_double(r.min_gain));
    }
    auto w = wilson_interval(hits, T);
    out.cells.push_back(
        json{{"n", cells[ci].n},
             {"lambda", cells[ci].lambda},
             {"trials", T},
             {"frequency", static_cast<double>(hits) / T},
             {"wilson_lo", w.lo},
             {"wilson_hi", w.hi},
             {"mean_matched_count", static_cast<double>(matched_sum) / T}});
  }
  return out;
}

// ---------- bounds ----------

KindOutput run_bounds(const ExperimentConfig& cfg) {
  KindOutput out;
  out.header = "params,quantity,value,regime_ok";
  const std::vector<int> s_list = cfg.s_list.empty() ? std::vector<int>{1}
                                                     : cfg.s_list;
  for (int n : cfg.n_list) {
    const double p = cell_p(cfg, n);
    json cell{{"n", n}, {"p", p}};

    Theorem1Params tp{cfg.t1_C, cfg.t1_k, cfg.c1, cfg.c2, cfg.alpha, n};
    Theorem1Report t1 = theorem1_admissible(tp);
    const std::string ps1 = "n=" + std::to_string(n) +
                            ";C=" + fmt_double(cfg.t1_C) +
                            ";k=" + std::to_string(cfg.t1_k) +
                            ";c1=" + fmt_double(cfg.c1) +
                            ";c2=" + fmt_double(cfg.c2) +
                            ";alpha=" + fmt_double(cfg.alpha);
    auto push = [&](const std::string& params, const std::string& quantity,
                    double value, bool ok) {
      out.lines.push_back(params + "," + quantity + "," + fmt_double(value) +
                          "," + csv_bool(ok));
    };
    push(ps1, "theorem1_p", t1.p, t1.regime_ok);
    push(ps1, "c_limit", t1.c_limit, t1.c_ok);
    push(ps1, "alpha_max", t1.alpha_max, t1.alpha_ok);
    push(ps1, "D", t1.D, t1.regime_ok);
    cell["theorem1"] = json{{"p", t1.p},
                            {"c_limit", t1.c_limit},
                            {"alpha_max", t1.alpha_max},
                            {"D", t1.D},
                            {"regime_ok", t1.regime_ok},
                            {"notes", t1.notes}};

    const double mu = n * p;
    const double ch = chernoff(mu, cfg.eta);
    push("mu=" + fmt_double(mu) + ";eta=" + fmt_double(cfg.eta), "chernoff",
         ch, true);
    cell["chernoff"] = json{{"mu", mu}, {"eta", cfg.eta}, {"value", ch}};

    json nout_rows = json::array();
    for (int s : s_list) {
      IntervalReport ir = expected_nout_interval(n, p, s, cfg.c1, cfg.c2);
      const std::string ps = "n=" + std::to_string(n) + ";p=" + fmt_double(p) +
                             ";s=" + std::to_string(s) +
                             ";c1=" + fmt_double(cfg.c1) +
                             ";c2=" + fmt_double(cfg.c2);
      push(ps, "nout_lo", ir.lo, ir.regime_ok);
      push(ps, "nout_hi", ir.hi, ir.regime_ok);
      nout_rows.push_back(json{{"s", s},
                               {"lo", ir.lo},
                               {"hi", ir.hi},
                               {"regime_ok", ir.regime_ok}});
    }
    cell["nout"] = nout_rows;

    json pivot_rows = json::array();
    for (int l = 1; l <= cfg.l_max; ++l) {
      IntervalReport ir = pivot_interval(n, p, l, cfg.c1, cfg.c2);
      const std::string ps = "n=" + std::to_string(n) + ";p=" + fmt_double(p) +
                             ";l=" + std::to_string(l) +
                             ";c1=" + fmt_double(cfg.c1) +
                             ";c2=" + fmt_double(cfg.c2);
      push(ps, "pivot_lo", ir.lo, ir.regime_ok);
      push(ps, "pivot_hi", ir.hi, ir.regime_ok);
      pivot_rows.push_back(json{{"l", l},
                                {"lo", ir.lo},
                                {"hi", ir.hi},
                                {"log_lo", ir.log_lo},
                                {"log_hi", ir.log_hi},
                                {"regime_ok", ir.regime_ok}});
    }
    cell["pivot"] = pivot_rows;

    if (p > 0 && p < 1) {
      Theorem2Report t2 = theorem2_failure(n, p, cfg.d1, cfg.d2);
      const std::string ps = "n=" + std::to_string(n) + ";p=" + fmt_double(p) +
                             ";d1=" + fmt_double(cfg.d1) +
                             ";d2=" + fmt_double(cfg.d2);
      push(ps, "term1_log", t2.term1_log, !t2.lower_clamped);
      push(ps, "term2_log", t2.term2_log, !t2.lower_clamped);
      push(ps, "log_q", t2.log_q, !t2.lower_clamped);
      push(ps, "q", t2.q, !t2.lower_clamped);
      push(ps, "lower_bound", t2.lower_bound, !t2.lower_clamped);
      cell["theorem2"] = json{{"term1_log", t2.term1_log},
                              {"term2_log", t2.term2_log},
                              {"log_q", t2.log_q},
                              {"q", t2.q},
                              {"lower_bound", t2.lower_bound},
                              {"lower_clamped", t2.lower_clamped},
                              {"notes", t2.notes}};
    }
    out.cells.push_back(cell);
  }
  return out;
}

// ---------- check ----------

KindOutput run_check(const ExperimentConfig& cfg) {
  const int C = static_cast<int>(cfg.n_list.size());
  const int T = cfg.trials;
  struct R {
    Verdict good = Verdict::Unknown;
    double good_margin = 0;
    double c1_star = 0, c2_star = 0;
    Verdict nice = Verdict::Unknown;
    double nice_margin = 0;
  };
  std::vector<R> res(static_cast<std::size_t>(C) * T);
  parallel_for(C * T, cfg.threads, [&](int i) {
    const int ci = i / T, t = i % T;
    const int n = cfg.n_list[ci];
    const double p = cell_p(cfg, n);
    ProbabilityAssignment a = build_assignment(
        effective_family(cfg, n), n,
        mix64(cfg.master_seed, trial_seed(ci, t)));
    R r;
    ConditionReport rg = check_good(a, GoodnessParams{cfg.alpha, cfg.c1,
                                                      cfg.c2, p});
    r.good = rg.verdict;
    r.good_margin = rg.margin;
    auto [c1s, c2s] = fit_good_constants(a, cfg.alpha, p);
    r.c1_star = c1s;
    r.c2_star = c2s;
    ConditionReport rn = check_nice(a, NicenessParams{cfg.beta, cfg.d1,
                                                      cfg.d2, p});
    r.nice = rn.verdict;
    r.nice_margin = rn.margin;
    res[i] = r;
  });

  KindOutput out;
  out.header =
      "n,trial,seed,good_verdict,good_margin,c1_star,c2_star,nice_verdict,"
      "nice_margin";
  for (int ci = 0; ci < C; ++ci) {
    const int n = cfg.n_list[ci];
    int good_holds = 0, nice_holds = 0, nice_unknown = 0;
    double c1_sum = 0, c2_sum = 0;
    for (int t = 0; t < T; ++t) {
      const R& r = res[static_cast<std::size_t>(ci) * T + t];
      good_holds += r.good == Verdict::Holds ? 1 : 0;
      nice_holds += r.nice == Verdict::Holds ? 1 : 0;
      nice_unknown += r.nice == Verdict::Unknown ? 1 : 0;
      c1_sum += r.c1_star;
      c2_sum += r.c2_star;
      out.lines.push_back(std::to_string(n) + "," + std::to_string(t) + "," +
                          std::to_string(trial_seed(ci, t)) + "," +
                          to_string(r.good) + "," + fmt_double(r.good_margin) +
                          "," + fmt_double(r.c1_star) + "," +
                          fmt_double(r.c2_star) + "," + to_string(r.nice) +
                          "," + fmt_double(r.nice_margin));
    }
    out.cells.push_back(json{{"n", n},
                             {"p", cell_p(cfg, n)},
                             {"trials", T},
                             {"good_holds", good_holds},
                             {"nice_holds", nice_holds},
                             {"nice_unknown", nice_unknown},
                             {"mean_c1_star", c1_sum / T},
                             {"mean_c2_star", c2_sum / T}});
  }
  return out;
}

void validate_config(const ExperimentConfig& cfg) {
  static const char* kinds[] = {"ham_frequency", "per_frequency", "expansion",
                                "pivots",        "exclusion",     "channel",
                                "bounds",        "check"};
  bool known = false;
  for (const char* k : kinds) known = known || cfg.kind == k;
  if (!known)
    throw std::invalid_argument("config field 'kind': unknown experiment '" +
                                cfg.kind + "'");
  if (cfg.n_list.empty())
    throw std::invalid_argument("config field 'n': list must be non-empty");
  for (int n : cfg.n_list)
    if (n < (cfg.kind == "channel" ? 1 : 2))
      throw std::invalid_argument("config field 'n': value too small");
  if (cfg.trials < 1)
    throw std::invalid_argument("config field 'trials': must be >= 1");
  if (cfg.threads < 1)
    throw std::invalid_argument("config field 'threads': must be >= 1");
  if (cfg.max_rotations < 1 || cfg.max_restarts < 1)
    throw std::invalid_argument("config field 'budget': must be positive");
  if (cfg.generations < 1)
    throw std::invalid_argument("config field 'generations': must be >= 1");
  if (cfg.kind == "expansion" && cfg.sizes.empty())
    throw std::invalid_argument(
        "config field 'sizes': expansion needs at least one set size");
  if (cfg.out_prefix.empty())
    throw std::invalid_argument("config field 'out_prefix': must be set");
}

void write_text(const std::string& path, const std::string& content) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << content;
}

}  // namespace

RunOutput run(const ExperimentConfig& cfg) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();

  KindOutput out;
  if (cfg.kind == "ham_frequency") out = run_ham(cfg);
  else if (cfg.kind == "per_frequency") out = run_per(cfg);
  else if (cfg.kind == "expansion") out = run_expansion(cfg);
  else if (cfg.kind == "pivots") out = run_pivots(cfg);
  else if (cfg.kind == "exclusion") out = run_exclusion(cfg);
  else if (cfg.kind == "channel") out = run_channel(cfg);
  else if (cfg.kind == "bounds") out = run_bounds(cfg);
  else out = run_check(cfg);

  std::string csv = out.header + "\n";
  for (const std::string& line : out.lines) csv += line + "\n";

  json summary{{"schema_version", cfg.schema_version},
               {"kind", cfg.kind},
               {"master_seed", cfg.master_seed},
               {"trials", cfg.trials},
               {"cells", out.cells}};

  RunOutput ro;
  ro.csv_path = cfg.out_prefix + "_trials.csv";
  ro.summary_path = cfg.out_prefix + "_summary.json";
  ro.summary_json = summary.dump(2) + "\n";
  write_text(ro.csv_path, csv);
  write_text(ro.summary_path, ro.summary_json);

  const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
  // Wall-clock stays on stderr so output files are byte-reproducible.
  std::cerr << cfg.kind << ": " << out.lines.size() << " rows in " << ms
            << " ms -> " << ro.csv_path << "\n";
  return ro;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("config: invalid JSON: ") +
                                e.what());
  }
  ExperimentConfig cfg;
  try {
    cfg.schema_version = j.value("schema_version", 1);
    cfg.kind = j.at("kind").get<std::string>();
    for (const auto& v : j.at("n")) cfg.n_list.push_back(v.get<int>());
    cfg.trials = j.value("trials", 1);
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    cfg.threads = j.value("threads", 1);
    cfg.out_prefix = j.value("out_prefix", std::string("experiment"));
    if (j.contains("family"))
      cfg.family = family_from_json(j.at("family").dump());
    if (j.contains("p_rule")) {
      const json& r = j.at("p_rule");
      const std::string rk = r.value("kind", std::string("fixed"));
      if (rk == "fixed") {
        cfg.p_rule.kind = PRule::Kind::Fixed;
        cfg.p_rule.p = r.at("p").get<double>();
      } else if (rk == "power") {
        cfg.p_rule.kind = PRule::Kind::Power;
        cfg.p_rule.C = r.value("C", 1.0);
        cfg.p_rule.k = r.value("k", 1);
      } else if (rk == "log_over_sqrt") {
        cfg.p_rule.kind = PRule::Kind::LogOverSqrt;
      } else {
        throw std::invalid_argument("config field 'p_rule.kind': unknown '" +
                                    rk + "'");
      }
    }
    if (j.contains("budget")) {
      const json& b = j.at("budget");
      cfg.max_rotations = b.value("max_rotations", cfg.max_rotations);
      cfg.max_restarts = b.value("max_restarts", cfg.max_restarts);
    }
    cfg.generations = j.value("generations", cfg.generations);
    if (j.contains("sizes"))
      for (const auto& v : j.at("sizes")) cfg.sizes.push_back(v.get<int>());
    cfg.probes = j.value("probes", cfg.probes);
    if (j.contains("constants")) {
      const json& c = j.at("constants");
      cfg.c1 = c.value("c1", cfg.c1);
      cfg.c2 = c.value("c2", cfg.c2);
      cfg.d1 = c.value("d1", cfg.d1);
      cfg.d2 = c.value("d2", cfg.d2);
      cfg.alpha = c.value("alpha", cfg.alpha);
      cfg.beta = c.value("beta", cfg.beta);
      cfg.eta = c.value("eta", cfg.eta);
    }
    if (j.contains("s_list"))
      for (const auto& v : j.at("s_list")) cfg.s_list.push_back(v.get<int>());
    cfg.l_max = j.value("l_max", cfg.l_max);
    if (j.contains("theorem1")) {
      const json& t = j.at("theorem1");
      cfg.t1_C = t.value("C", cfg.t1_C);
      cfg.t1_k = t.value("k", cfg.t1_k);
    }
    if (j.contains("fading"))
      cfg.fading = fading_from_json(j.at("fading").dump());
    if (j.contains("lambdas"))
      for (const auto& v : j.at("lambdas"))
        cfg.lambdas.push_back(v.get<double>());
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

}  // namespace irg
