#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "doctest.h"
#include "json.hpp"

#include "irg/harness.hpp"
#include "irg/rng.hpp"

using namespace irg;
using nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string tmp_prefix(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / "irg_harness_tests";
  std::filesystem::create_directories(dir);
  return (dir / tag).string();
}

bool throws_config_error(const std::string& text, const std::string& needle) {
  try {
    ExperimentConfig::from_json_text(text);
  } catch (const std::invalid_argument& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace

TEST_CASE("fmt_double emits locale-free shortest round trips") {
  CHECK(fmt_double(std::nan("")) == "nan");
  CHECK(fmt_double(INFINITY) == "inf");
  CHECK(fmt_double(-INFINITY) == "-inf");
  CHECK(fmt_double(0.5) == "0.5");
  CHECK(fmt_double(2.0) == "2");
  CHECK(fmt_double(1.0 / 3.0) == "0.3333333333333333");
  for (double x : {1e-300, 12345.6789, -0.1, 3.141592653589793}) {
    CHECK(std::stod(fmt_double(x)) == x);
  }
}

TEST_CASE("reference probability rules") {
  PRule fixed;
  fixed.kind = PRule::Kind::Fixed;
  fixed.p = 0.3;
  CHECK(fixed.value(10) == 0.3);
  CHECK(fixed.value(100000) == 0.3);

  PRule power;
  power.kind = PRule::Kind::Power;
  power.C = 1.0;
  power.k = 1;
  CHECK(power.value(4096) == doctest::Approx(0.015625).epsilon(1e-14));

  PRule los;
  los.kind = PRule::Kind::LogOverSqrt;
  CHECK(los.value(256) ==
        doctest::Approx(0.34657359027997264).epsilon(1e-14));

  ExperimentConfig cfg;
  cfg.p_rule = power;
  CHECK(cell_p(cfg, 4096) == doctest::Approx(0.015625));
  cfg.family = Homogeneous{0.25};
  CHECK(cell_p(cfg, 4096) == 0.25);  // family wins over the rule
  cfg.family = TwoBlock{0.8, 0.2, 2, 2};
  CHECK(cell_p(cfg, 4096) ==
        doctest::Approx(0.015625));  // non-homogeneous family: rule again
}

TEST_CASE("config parsing: minimal text and defaults") {
  auto cfg = ExperimentConfig::from_json_text(
      "{\"kind\":\"check\",\"n\":[4]}");
  CHECK(cfg.kind == "check");
  REQUIRE(cfg.n_list.size() == 1);
  CHECK(cfg.n_list[0] == 4);
  CHECK(cfg.trials == 1);
  CHECK(cfg.master_seed == 0);
  CHECK(cfg.threads == 1);
  CHECK(cfg.out_prefix == "experiment");
  CHECK(!cfg.family.has_value());
  CHECK(cfg.p_rule.kind == PRule::Kind::Fixed);
  CHECK(cfg.max_rotations == 4000);
  CHECK(cfg.max_restarts == 10);
  CHECK(cfg.generations == 2);
  CHECK(cfg.probes == 4);
  CHECK(cfg.c1 == 1);
  CHECK(cfg.alpha == 0.25);
  CHECK(cfg.eta == 0.25);
  CHECK(cfg.l_max == 2);
  CHECK(cfg.t1_C == 0.1);
}

TEST_CASE("config parsing: full document") {
  const std::string text = R"({
    "schema_version": 1,
    "kind": "pivots",
    "n": [64, 128],
    "trials": 7,
    "master_seed": 99,
    "threads": 3,
    "out_prefix": "/tmp/irg_harness_tests/full",
    "family": {"family": "homogeneous", "p": 0.25},
    "p_rule": {"kind": "power", "C": 2.0, "k": 2},
    "budget": {"max_rotations": 123, "max_restarts": 4},
    "generations": 3,
    "sizes": [1, 2],
    "probes": 9,
    "constants": {"c1": 0.5, "c2": 2.0, "d1": 0.1, "d2": 0.2,
                  "alpha": 0.125, "beta": 0.0625, "eta": 0.3},
    "s_list": [1, 5],
    "l_max": 4,
    "theorem1": {"C": 0.05, "k": 2},
    "fading": {"kind": "uniform", "lo": 0.0, "hi": 2.0},
    "lambdas": [0.1, 0.2]
  })";
  auto cfg = ExperimentConfig::from_json_text(text);
  CHECK(cfg.kind == "pivots");
  CHECK(cfg.n_list == std::vector<int>{64, 128});
  CHECK(cfg.trials == 7);
  CHECK(cfg.master_seed == 99);
  CHECK(cfg.threads == 3);
  REQUIRE(cfg.family.has_value());
  CHECK(std::get<Homogeneous>(*cfg.family).p == 0.25);
  CHECK(cfg.p_rule.kind == PRule::Kind::Power);
  CHECK(cfg.p_rule.C == 2.0);
  CHECK(cfg.p_rule.k == 2);
  CHECK(cfg.max_rotations == 123);
  CHECK(cfg.max_restarts == 4);
  CHECK(cfg.generations == 3);
  CHECK(cfg.sizes == std::vector<int>{1, 2});
  CHECK(cfg.probes == 9);
  CHECK(cfg.c1 == 0.5);
  CHECK(cfg.d2 == 0.2);
  CHECK(cfg.beta == 0.0625);
  CHECK(cfg.eta == 0.3);
  CHECK(cfg.s_list == std::vector<int>{1, 5});
  CHECK(cfg.l_max == 4);
  CHECK(cfg.t1_C == 0.05);
  CHECK(cfg.t1_k == 2);
  CHECK(std::holds_alternative<UniformGain>(cfg.fading));
  CHECK(cfg.lambdas == std::vector<double>{0.1, 0.2});
}

TEST_CASE("config parsing: rejection messages") {
  CHECK(throws_config_error("{\"kind\":\"nope\",\"n\":[4]}",
                            "config field 'kind': unknown experiment 'nope'"));
  CHECK(throws_config_error("{\"kind\":\"check\",\"n\":[]}",
                            "config field 'n'"));
  CHECK(throws_config_error("{\"kind\":\"check\",\"n\":[1]}",
                            "config field 'n': value too small"));
  CHECK(throws_config_error(
      "{\"kind\":\"check\",\"n\":[4],\"trials\":0}",
      "config field 'trials'"));
  CHECK(throws_config_error("{\"kind\":\"expansion\",\"n\":[8]}",
                            "config field 'sizes'"));
  CHECK(throws_config_error("{\"kind\":\"check\",\"n\":[4],\"threads\":0}",
                            "config field 'threads'"));
  CHECK(throws_config_error(
      "{\"kind\":\"check\",\"n\":[4],\"budget\":{\"max_rotations\":0}}",
      "config field 'budget'"));
  CHECK(throws_config_error(
      "{\"kind\":\"check\",\"n\":[4],\"p_rule\":{\"kind\":\"what\"}}",
      "config field 'p_rule.kind'"));
  CHECK(throws_config_error("{\"kind\":\"check\"", "config: invalid JSON"));
  CHECK(throws_config_error("{\"n\":[4]}", "config: "));  // missing kind
  // channel is the one kind that accepts n = 1
  CHECK_NOTHROW(
      ExperimentConfig::from_json_text("{\"kind\":\"channel\",\"n\":[1]}"));
  CHECK_THROWS_AS(ExperimentConfig::from_json_file("/nonexistent/cfg.json"),
                  std::invalid_argument);
}

TEST_CASE("run: complete graph is always Hamiltonian") {
  ExperimentConfig cfg;
  cfg.kind = "ham_frequency";
  cfg.n_list = {8};
  cfg.trials = 5;
  cfg.master_seed = 12;
  cfg.family = Homogeneous{1.0};
  cfg.out_prefix = tmp_prefix("ham_complete");
  RunOutput ro = run(cfg);

  CHECK(ro.csv_path == cfg.out_prefix + "_trials.csv");
  CHECK(ro.summary_path == cfg.out_prefix + "_summary.json");
  CHECK(slurp(ro.summary_path) == ro.summary_json);

  const std::string csv = slurp(ro.csv_path);
  std::stringstream ss(csv);
  std::string line;
  REQUIRE(std::getline(ss, line));
  CHECK(line ==
        "n,trial,seed,path_length,hamiltonian,rotations_used,restarts_used");
  int rows = 0;
  while (std::getline(ss, line)) {
    // seed column is mix64(cell_index, trial_index), independent of master
    std::string expect = "8," + std::to_string(rows) + "," +
                         std::to_string(mix64(0, rows)) + ",7,1,";
    CHECK(line.substr(0, expect.size()) == expect);
    ++rows;
  }
  CHECK(rows == 5);

  json summary = json::parse(ro.summary_json);
  CHECK(summary["kind"] == "ham_frequency");
  CHECK(summary["master_seed"] == 12);
  CHECK(summary["trials"] == 5);
  REQUIRE(summary["cells"].size() == 1);
  const json& cell = summary["cells"][0];
  CHECK(cell["n"] == 8);
  CHECK(cell["frequency"] == 1.0);
  CHECK(cell["mean_path_length"] == 7.0);
  CHECK(cell["wilson_hi"] == 1.0);
}

TEST_CASE("run: empty graph has no matching at all") {
  ExperimentConfig cfg;
  cfg.kind = "per_frequency";
  cfg.n_list = {8};
  cfg.trials = 4;
  cfg.family = Homogeneous{0.0};
  cfg.out_prefix = tmp_prefix("per_empty");
  RunOutput ro = run(cfg);
  json summary = json::parse(ro.summary_json);
  const json& cell = summary["cells"][0];
  CHECK(cell["frequency"] == 0.0);
  CHECK(cell["freq_low"] == 0.0);
  CHECK(cell["mean_matching_size"] == 0.0);
  CHECK(cell["augments_applied"] == 0);
  CHECK(cell["z"] == 2);
}

TEST_CASE("run: output bytes are reproducible and thread-independent") {
  ExperimentConfig cfg;
  cfg.kind = "ham_frequency";
  cfg.n_list = {8, 10};
  cfg.trials = 6;
  cfg.master_seed = 77;
  cfg.family = Homogeneous{0.5};
  cfg.out_prefix = tmp_prefix("repro_a");
  RunOutput a = run(cfg);

  cfg.out_prefix = tmp_prefix("repro_b");
  cfg.threads = 4;
  RunOutput b = run(cfg);

  CHECK(a.summary_json == b.summary_json);
  CHECK(slurp(a.csv_path) == slurp(b.csv_path));

  cfg.out_prefix = tmp_prefix("repro_c");
  cfg.threads = 1;
  RunOutput c = run(cfg);
  CHECK(a.summary_json == c.summary_json);
  CHECK(slurp(a.csv_path) == slurp(c.csv_path));
}

TEST_CASE("run: expansion rows land in the summary") {
  ExperimentConfig cfg;
  cfg.kind = "expansion";
  cfg.n_list = {64};
  cfg.trials = 20;
  cfg.family = Homogeneous{0.2};
  cfg.sizes = {1, 4};
  cfg.out_prefix = tmp_prefix("expansion");
  RunOutput ro = run(cfg);
  CHECK(slurp(ro.csv_path).rfind(
            "n,s,trials,fraction_in_interval,predicted_lo,predicted_hi,"
            "observed_min,observed_median,observed_max,regime_ok",
            0) == 0);
  json summary = json::parse(ro.summary_json);
  const json& cell = summary["cells"][0];
  REQUIRE(cell["rows"].size() == 2);
  CHECK(cell["rows"][0]["s"] == 1);
  CHECK(cell["rows"][1]["s"] == 4);
  double f = cell["frequency"].get<double>();
  CHECK(f >= 0.0);
  CHECK(f <= 1.0);
}

TEST_CASE("run: pivot sweep emits per-generation columns") {
  ExperimentConfig cfg;
  cfg.kind = "pivots";
  cfg.n_list = {16};
  cfg.trials = 4;
  cfg.family = Homogeneous{0.9};
  cfg.generations = 2;
  cfg.out_prefix = tmp_prefix("pivots");
  RunOutput ro = run(cfg);
  CHECK(slurp(ro.csv_path).rfind(
            "n,trial,seed,path_length,p1,p2,p1_in_interval,growth_ok", 0) ==
        0);
  json cell = json::parse(ro.summary_json)["cells"][0];
  CHECK(cell["mean_counts"].size() == 2);
  CHECK(cell["interval_lo"].get<double>() <= cell["interval_hi"].get<double>());
  CHECK(cell.contains("growth_frequency"));
}

TEST_CASE("run: exclusion on a complete graph always sits next to a pivot") {
  ExperimentConfig cfg;
  cfg.kind = "exclusion";
  cfg.n_list = {8};
  cfg.trials = 4;
  cfg.family = Homogeneous{1.0};
  cfg.out_prefix = tmp_prefix("exclusion");
  RunOutput ro = run(cfg);
  CHECK(slurp(ro.csv_path).rfind(
            "n,trial,seed,j,path_length,total_pivots,adjacent_to_pivot,"
            "rotations_used",
            0) == 0);
  json cell = json::parse(ro.summary_json)["cells"][0];
  CHECK(cell["frequency"] == 1.0);
  CHECK(cell["mean_path_length"] == 6.0);  // spanning path on n-1 vertices
}

TEST_CASE("run: channel grid covers lambdas and the default rule") {
  ExperimentConfig cfg;
  cfg.kind = "channel";
  cfg.n_list = {4};
  cfg.trials = 4;
  cfg.lambdas = {0.0, 0.5};
  cfg.out_prefix = tmp_prefix("channel");
  RunOutput ro = run(cfg);
  CHECK(slurp(ro.csv_path).rfind(
            "n,lambda,trial,seed,success,matched_count,min_matched_gain", 0) ==
        0);
  json cells = json::parse(ro.summary_json)["cells"];
  REQUIRE(cells.size() == 2);
  CHECK(cells[0]["lambda"] == 0.0);
  CHECK(cells[0]["frequency"] == 1.0);  // lambda 0 matches everyone
  CHECK(cells[0]["mean_matched_count"] == 4.0);

  ExperimentConfig def = cfg;
  def.n_list = {16};
  def.lambdas.clear();
  def.out_prefix = tmp_prefix("channel_default");
  json dcell = json::parse(run(def).summary_json)["cells"][0];
  CHECK(dcell["lambda"].get<double>() ==
        doctest::Approx(std::log(4.0 / std::log(16.0))).epsilon(1e-14));
}

TEST_CASE("run: bounds table enumerates every closed form") {
  ExperimentConfig cfg;
  cfg.kind = "bounds";
  cfg.n_list = {256};
  cfg.p_rule.kind = PRule::Kind::Fixed;
  cfg.p_rule.p = 0.5;
  cfg.s_list = {1};
  cfg.l_max = 2;
  cfg.out_prefix = tmp_prefix("bounds");
  RunOutput ro = run(cfg);
  const std::string csv = slurp(ro.csv_path);
  CHECK(csv.rfind("params,quantity,value,regime_ok", 0) == 0);
  // 4 theorem1 + 1 chernoff + 2 nout + 4 pivot + 5 theorem2 rows
  int rows = -1;
  for (std::size_t i = 0; i < csv.size(); ++i) rows += csv[i] == '\n';
  CHECK(rows == 16);
  json cell = json::parse(ro.summary_json)["cells"][0];
  CHECK(cell.contains("theorem1"));
  CHECK(cell.contains("chernoff"));
  CHECK(cell["nout"].size() == 1);
  CHECK(cell["pivot"].size() == 2);
  CHECK(cell["theorem2"]["q"].get<double>() > 0.0);
  CHECK(std::isfinite(cell["theorem2"]["log_q"].get<double>()));
}

TEST_CASE("run: check kind reports verdict frequencies") {
  ExperimentConfig cfg;
  cfg.kind = "check";
  cfg.n_list = {8};
  cfg.trials = 3;
  cfg.family = Homogeneous{0.5};
  cfg.out_prefix = tmp_prefix("check");
  RunOutput ro = run(cfg);
  CHECK(slurp(ro.csv_path).rfind(
            "n,trial,seed,good_verdict,good_margin,c1_star,c2_star,"
            "nice_verdict,nice_margin",
            0) == 0);
  json cell = json::parse(ro.summary_json)["cells"][0];
  CHECK(cell["good_holds"] == 3);
  CHECK(cell["nice_holds"] == 3);
  CHECK(cell["nice_unknown"] == 0);
  CHECK(cell["mean_c1_star"].get<double>() == doctest::Approx(1.0));
  CHECK(cell["mean_c2_star"].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("emit_plots writes deterministic svg and a python twin") {
  ExperimentConfig cfg;
  cfg.kind = "ham_frequency";
  cfg.n_list = {8, 12};
  cfg.trials = 4;
  cfg.family = Homogeneous{0.8};
  cfg.out_prefix = tmp_prefix("plot_src");
  RunOutput ro = run(cfg);

  const std::string prefix = tmp_prefix("plot_out");
  emit_plots({ro.summary_path}, prefix);
  const std::string svg1 = slurp(prefix + ".svg");
  CHECK(svg1.rfind("<svg", 0) == 0);
  const std::string py = slurp(prefix + ".py");
  CHECK(py.find("matplotlib") != std::string::npos);

  emit_plots({ro.summary_path}, prefix);
  CHECK(slurp(prefix + ".svg") == svg1);

  CHECK_THROWS_AS(emit_plots({}, prefix), std::invalid_argument);
  CHECK_THROWS_AS(emit_plots({"/nonexistent/summary.json"}, prefix),
                  std::runtime_error);
}
