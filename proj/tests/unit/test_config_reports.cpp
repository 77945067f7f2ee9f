/*
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


#include <gtest/gtest.h>

#include "json.hpp"

#include "hess/config.hpp"
#include "hess/reports.hpp"
#include "support.hpp"

namespace hess {
namespace {

using test::code_of;
using test::TempDir;

bool has_path(const std::vector<Diagnostic>& ds, const std::string& path) {
  for (const auto& d : ds)
    if (d.path == path) return true;
  return false;
}

TEST(Config, DefaultsValidateClean) {
  EXPECT_TRUE(validate_config(default_config_json()).empty());
  EXPECT_TRUE(validate_config("{}").empty());
  EXPECT_TRUE(validate_config("").empty());
  const auto c = parse_config(default_config_json());
  EXPECT_EQ(c.years, 15);
  EXPECT_EQ(c.scenarios.size(), 5u);
  EXPECT_EQ(c.batteries[Tech::kLib], BatterySpec::lib_default());
  EXPECT_EQ(config_hash(c), config_hash(RunConfig{}));
}

TEST(Config, InvertedWindowNamesField) {
  const auto ds = validate_config(R"({"batteries":{"lib":{"soc_min":0.9,"soc_max":0.1}}})");
  ASSERT_FALSE(ds.empty());
  EXPECT_TRUE(has_path(ds, "/batteries/lib/soc_min")) << ds[0].path << ": " << ds[0].message;
  EXPECT_EQ(code_of([] { parse_config(R"({"batteries":{"lib":{"soc_min":0.9,"soc_max":0.1}}})"); }),
            ErrorCode::kConfig);
}

TEST(Config, MissingProfileNamesPath) {
  const auto ds = validate_config(R"({"profiles":{"pv":{"path":"nope/pv.csv"}}})", "/tmp");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].path, "/profiles/pv/path");
  EXPECT_NE(ds[0].message.find("nope/pv.csv"), std::string::npos);
}

TEST(Config, UnknownKeysAndTypes) {
  auto ds = validate_config(R"({"bogus":1,"years":"ten","tariff":{"price_peek":0.2}})");
  EXPECT_TRUE(has_path(ds, "/bogus"));
  EXPECT_TRUE(has_path(ds, "/years"));
  EXPECT_TRUE(has_path(ds, "/tariff/price_peek"));
  ds = validate_config("[1,2]");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds[0].path, "");
  ds = validate_config("{ not json");
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(code_of([] { check_config_syntax("{ not json"); }), ErrorCode::kConfig);
}

TEST(Config, SemanticRanges) {
  EXPECT_TRUE(has_path(validate_config(R"({"years":16})"), "/years"));
  EXPECT_TRUE(has_path(validate_config(R"({"scenarios":["s1","s7"]})"), "/scenarios/1"));
  EXPECT_TRUE(has_path(validate_config(R"({"policy":{"alpha":0.5}})"), "/policy/alpha"));
  EXPECT_TRUE(has_path(validate_config(R"({"tariff":{"offpeak_start":"25:00"}})"), "/tariff/offpeak_start"));
  EXPECT_TRUE(validate_config(R"({"sweep":{"use_case":"all"}})").empty());
}

TEST(Config, OverridesApply) {
  const auto c = parse_config(R"({"years":3,"scenarios":["s3"],"policy":{"band_w":500},
                                  "kpi":{"obu_normalization":"usable-window"},"sweep":{"use_case":"all"}})");
  EXPECT_EQ(c.years, 3);
  EXPECT_EQ(c.rates.horizon, 3);
  EXPECT_EQ(c.scenarios, std::vector<PolicyId>{PolicyId::kBandSplit});
  EXPECT_EQ(c.policy.band_w, 500.0);
  EXPECT_EQ(c.kpi.obu, ObuNormalization::kUsableWindow);
  EXPECT_EQ(c.sweep.use_cases.size(), 3u);
}

TEST(Config, HashIgnoresRunLocationOnly) {
  RunConfig a;
  RunConfig b;
  b.output_dir = "elsewhere";
  b.workers = 7;
  b.trace = true;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  b.years = 14;
  EXPECT_NE(config_hash(a), config_hash(b));
}

TEST(Config, SetValueCreatesParents) {
  const auto text = set_config_value("{}", "/batteries/lib/soc_max", "0.8");
  EXPECT_EQ(parse_config(text).batteries[Tech::kLib].soc_max, 0.8);
  EXPECT_EQ(code_of([] { set_config_value("{}", "/years", "not json"); }), ErrorCode::kConfig);
}

TEST(Config, ReadMissingFileIsIo) {
  EXPECT_EQ(code_of([] { read_text_file("/nonexistent/config.json"); }), ErrorCode::kIo);
}

TEST(Config, ProfilesFromFiles) {
  TempDir dir;
  {
    std::ofstream(dir.path / "pv.csv") << test::year_csv(3600, [](long) { return 250.0; });
  }
  const auto c = parse_config(R"({"profiles":{"pv":{"path":"pv.csv","step_s":3600}},"years":1})", dir.path);
  const auto study = build_study(c);
  EXPECT_EQ(study.sim.pv[12345], 250.0);
  EXPECT_EQ(study.sim.years, 1);
}

TEST(Reports, NumbersRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(306600.0), "306600");
  for (double v : {1.0 / 3.0, 1e-300, 0.848, 37933.5}) EXPECT_EQ(std::stod(format_number(v)), v);
}

TEST(Reports, SweepCsvRoundTrip) {
  std::vector<SweepResult> rs;
  const auto cases = enumerate_cases(UseCase::kWinterVariableSummerFixed);
  for (std::size_t i = 0; i < 5; ++i) {
    SweepResult r;
    r.sweep_case = cases[i * 50];
    r.scr = 0.1 * static_cast<double>(i) + 1.0 / 3.0;
    r.obu = {{0.01 * static_cast<double>(i), 0.2}};
    r.npv = -1234.5678;
    if (i % 2) r.lcoe = 0.5 + 1e-7 * static_cast<double>(i);
    rs.push_back(r);
  }
  const auto csv = sweep_csv(rs);
  EXPECT_EQ(csv.substr(0, csv.find('\n') + 1), sweep_csv_header());
  EXPECT_EQ(parse_sweep_csv(csv, UseCase::kWinterVariableSummerFixed), rs);
  EXPECT_TRUE(parse_sweep_csv(csv, UseCase::kAllYearVariable).empty());
  // An unterminated last line (interrupted write) is dropped.
  const auto cut = csv.substr(0, csv.size() - 5);
  EXPECT_EQ(parse_sweep_csv(cut, UseCase::kWinterVariableSummerFixed).size(), 4u);
}

TEST(Reports, RenderCsvFromJson) {
  StudyInputs in;
  in.sim.years = 2;
  in.rates.horizon = 2;
  in.rates.replacement_year = 2;
  const std::vector<ScenarioOutcome> outs{evaluate_scenario(in.policy(PolicyId::kFixedSplit), in),
                                          evaluate_scenario(in.policy(PolicyId::kSingleLib), in)};
  const auto kj = kpi_json(outs, in.kpi);
  const auto kcsv = render_csv(kj);
  EXPECT_EQ(kcsv.substr(0, kcsv.find('\n')),
            "formula_version,scenario,period,scr,ssr,grf,fgu,tgu,obu_vrfb,obu_lib,fbu_vrfb,fbu_lib,tbu_vrfb,tbu_lib,"
            "eg_kwh");
  EXPECT_EQ(std::count(kcsv.begin(), kcsv.end(), '\n'), 1 + 2 * 3);
  const auto doc = nlohmann::json::parse(kj);
  EXPECT_EQ(render_csv(doc.dump(2)), kcsv);  // formatting of the source does not matter
  const auto ecsv = render_csv(economics_json(outs));
  EXPECT_EQ(ecsv.substr(0, ecsv.find('\n')), "metric,s1,s5_single_lib");
  EXPECT_EQ(code_of([] { render_csv(R"({"kind":"other"})"); }), ErrorCode::kParse);
  EXPECT_EQ(code_of([] { render_csv("nope"); }), ErrorCode::kParse);
}

TEST(Reports, LedgerCsvHasOneRowPerYear) {
  SimulationInputs sim;
  sim.years = 2;
  const auto r = simulate_horizon(ScenarioPolicy::for_id(PolicyId::kFixedSplit), sim);
  const auto csv = ledger_csv(r.ledgers);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_EQ(csv.rfind("year,", 0), 0u);
}

TEST(Reports, AtomicWrite) {
  TempDir dir;
  write_file_atomic(dir.path / "a.txt", "hello");
  write_file_atomic(dir.path / "a.txt", "world");
  EXPECT_EQ(test::slurp(dir.path / "a.txt"), "world");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir.path), {}), 1);
}

}  // namespace
}  // namespace hess
