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

#include <algorithm>
#include <random>
#include <set>

#include "hess/sweep.hpp"
#include "support.hpp"

namespace hess {
namespace {

constexpr Tech V = Tech::kVrfb;
constexpr Tech L = Tech::kLib;

// Independent enumeration of the grid under the depth-of-discharge floor.
int brute_force_count(const std::vector<int>& mins, const std::vector<int>& maxs) {
  int n = 0;
  for (int lo : mins)
    for (int hi : maxs)
      if (hi - lo >= 40) ++n;
  return n;
}

StudyInputs one_year_inputs() {
  StudyInputs in;
  in.sim.years = 1;
  in.rates.horizon = 1;
  in.rates.replacement_year = 1;
  return in;
}

SweepResult fake(std::size_t index, double scr, double obu_v, double obu_l, std::optional<double> lcoe = {}) {
  SweepResult r;
  r.sweep_case.index = index;
  r.sweep_case.vrfb = {V, 5, 95};
  r.sweep_case.lib = {L, 10, 10 + static_cast<int>(index)};
  r.scr = scr;
  r.obu = {{obu_v, obu_l}};
  r.lcoe = lcoe;
  return r;
}

TEST(Enumerate, CountsMatchBruteForce) {
  EXPECT_EQ(brute_force_count({5, 15, 25, 35, 45}, {55, 65, 75, 85, 95}), 19);
  EXPECT_EQ(brute_force_count({10, 20, 30, 40}, {50, 60, 70, 80, 90}), 14);
  EXPECT_EQ(admissible_ranges(V).size(), 19u);
  EXPECT_EQ(admissible_ranges(L).size(), 14u);
  for (auto uc : {UseCase::kAllYearVariable, UseCase::kWinterVariableSummerFixed, UseCase::kWinterFixedSummerVariable}) {
    const auto cases = enumerate_cases(uc);
    ASSERT_EQ(cases.size(), 266u);
    for (std::size_t i = 0; i < cases.size(); ++i) {
      EXPECT_EQ(cases[i].index, i);
      EXPECT_EQ(cases[i].use_case, uc);
    }
  }
}

TEST(Enumerate, DepthFloorAndOrder) {
  const auto lib = admissible_ranges(L);
  EXPECT_EQ(std::count(lib.begin(), lib.end(), SocRange{L, 40, 50}), 0);
  EXPECT_EQ(std::count(lib.begin(), lib.end(), SocRange{L, 40, 80}), 1);
  for (const auto& r : lib) EXPECT_GE(r.depth_pct(), kMinDepthOfDischargePct);
  const auto cases = enumerate_cases(UseCase::kAllYearVariable);
  std::set<std::pair<int, int>> seen;
  for (const auto& c : cases) seen.insert({c.vrfb.min_pct * 100 + c.vrfb.max_pct, c.lib.min_pct * 100 + c.lib.max_pct});
  EXPECT_EQ(seen.size(), 266u);
  // VRFB-major: the first 14 cases share the first VRFB range.
  for (std::size_t i = 0; i < 14; ++i) EXPECT_EQ(cases[i].vrfb, cases[0].vrfb);
  EXPECT_NE(cases[14].vrfb, cases[0].vrfb);
}

TEST(Enumerate, ParseUseCase) {
  EXPECT_EQ(parse_use_case("uc2"), UseCase::kWinterVariableSummerFixed);
  EXPECT_EQ(to_string(UseCase::kWinterFixedSummerVariable), "uc3");
  EXPECT_EQ(test::code_of([] { parse_use_case("uc4"); }), ErrorCode::kConfig);
}

TEST(PolicyForCase, SeasonSemantics) {
  const StudyInputs in;
  SweepCase c;
  c.vrfb = {V, 25, 75};
  c.lib = {L, 30, 70};
  const SocWindow full_v{0.05, 0.95}, full_l{0.10, 0.90}, var_v{0.25, 0.75}, var_l{0.30, 0.70};
  c.use_case = UseCase::kAllYearVariable;
  auto p = policy_for_case(c, in);
  EXPECT_EQ(p.id, PolicyId::kSocSweepCase);
  EXPECT_EQ((*p.seasonal)[V].summer, var_v);
  EXPECT_EQ((*p.seasonal)[V].winter, var_v);
  c.use_case = UseCase::kWinterVariableSummerFixed;
  p = policy_for_case(c, in);
  EXPECT_EQ((*p.seasonal)[L].summer, full_l);
  EXPECT_EQ((*p.seasonal)[L].winter, var_l);
  c.use_case = UseCase::kWinterFixedSummerVariable;
  p = policy_for_case(c, in);
  EXPECT_EQ((*p.seasonal)[V].summer, var_v);
  EXPECT_EQ((*p.seasonal)[V].winter, full_v);
}

TEST(RunSweep, FullDefaultCaseReproducesFixedSplit) {
  const auto in = one_year_inputs();
  const auto cases = enumerate_cases(UseCase::kAllYearVariable);
  const auto it = std::find_if(cases.begin(), cases.end(), [](const SweepCase& c) {
    return c.vrfb == SocRange{V, 5, 95} && c.lib == SocRange{L, 10, 90};
  });
  ASSERT_NE(it, cases.end());
  const auto sweep_case = evaluate_scenario(policy_for_case(*it, in), in);
  const auto s1 = evaluate_scenario(in.policy(PolicyId::kFixedSplit), in);
  EXPECT_EQ(sweep_case.horizon.ledgers, s1.horizon.ledgers);
  EXPECT_EQ(sweep_case.kpis, s1.kpis);
}

TEST(RunSweep, NarrowingLibWindowNeverRaisesLibObu) {
  const auto in = one_year_inputs();
  SweepCase wide{0, UseCase::kAllYearVariable, {V, 5, 95}, {L, 10, 90}};
  SweepCase narrow{0, UseCase::kAllYearVariable, {V, 5, 95}, {L, 40, 80}};
  const auto a = evaluate_scenario(policy_for_case(wide, in), in);
  const auto b = evaluate_scenario(policy_for_case(narrow, in), in);
  EXPECT_LE(b.kpis.obu[L], a.kpis.obu[L]);
}

TEST(RunSweep, WideningWindowNeverShrinksPowerEnvelope) {
  const auto base = BatterySpec::lib_default();
  for (const auto& inner : admissible_ranges(L)) {
    for (const auto& outer : admissible_ranges(L)) {
      if (!(outer.min_pct <= inner.min_pct && inner.max_pct <= outer.max_pct)) continue;
      auto si = base, so = base;
      si.soc_min = inner.min_pct / 100.0;
      si.soc_max = inner.max_pct / 100.0;
      so.soc_min = outer.min_pct / 100.0;
      so.soc_max = outer.max_pct / 100.0;
      for (int k = 0; k <= 100; ++k) {
        BatteryState s = initial_state(base, {});
        s.soc = k / 100.0;
        const auto li = power_limits(si, s), lo = power_limits(so, s);
        ASSERT_GE(lo.charge_w, li.charge_w);
        ASSERT_GE(lo.discharge_w, li.discharge_w);
      }
    }
  }
}

TEST(RunSweep, CompletedCasesAreNotRerun) {
  const auto in = one_year_inputs();
  const auto cases = enumerate_cases(UseCase::kWinterFixedSummerVariable);
  SweepOptions opts;
  opts.workers = 2;
  for (const auto& c : cases) {
    if (c.index % 60 == 7) continue;  // five cases left to simulate
    SweepResult r;
    r.sweep_case = c;
    r.scr = 0.5;
    opts.completed.push_back(r);
  }
  std::vector<std::size_t> simulated;
  opts.on_result = [&](const SweepResult& r) { simulated.push_back(r.sweep_case.index); };
  const auto results = run_sweep(UseCase::kWinterFixedSummerVariable, in, opts);
  ASSERT_EQ(results.size(), 266u);
  std::sort(simulated.begin(), simulated.end());
  EXPECT_EQ(simulated, (std::vector<std::size_t>{7, 67, 127, 187, 247}));
  for (std::size_t i = 0; i < results.size(); ++i) {
    EXPECT_EQ(results[i].sweep_case, cases[i]);
    EXPECT_EQ(results[i].kpis.has_value(), i % 60 == 7);
  }
  // A simulated case matches a direct evaluation.
  const auto direct = evaluate_scenario(policy_for_case(cases[67], in), in);
  EXPECT_EQ(results[67].scr, direct.kpis.scr);
  EXPECT_EQ(results[67].obu, direct.kpis.obu);
}

TEST(Rank, SingleResultIsBestEverywhere) {
  const std::vector<SweepResult> one{fake(0, 0.8, 0.2, 0.1, 0.5)};
  const auto r = rank(one);
  ASSERT_EQ(r.ordered.size(), 1u);
  ASSERT_EQ(r.optima.size(), 4u);
  for (const auto& o : r.optima) {
    ASSERT_EQ(o.cases.size(), 1u) << o.kpi;
    EXPECT_EQ(o.cases[0], one[0].sweep_case);
  }
}

TEST(Rank, ObuBreaksScrTie) {
  const std::vector<SweepResult> rs{fake(0, 0.848, 0.0, 0.143), fake(1, 0.848, 0.0, 0.110)};
  const auto r = rank(rs);
  EXPECT_EQ(r.ordered[0].sweep_case.index, 1u);
  EXPECT_EQ(r.ordered[1].sweep_case.index, 0u);
  const auto by_lcoe = rank(std::vector<SweepResult>{fake(0, 0.8, 0, 0, 0.6), fake(1, 0.8, 0, 0, 0.5)},
                            SecondaryKpi::kLcoe);
  EXPECT_EQ(by_lcoe.ordered[0].sweep_case.index, 1u);
}

TEST(Rank, ScrDominatesAndTiesWithinTolerance) {
  const std::vector<SweepResult> rs{fake(0, 0.80, 0.1, 0.1), fake(1, 0.90, 0.5, 0.5), fake(2, 0.90005, 0.9, 0.9)};
  const auto r = rank(rs);
  EXPECT_EQ(r.ordered[0].sweep_case.index, 1u);  // tie with 2, lower OBU
  EXPECT_EQ(r.ordered[1].sweep_case.index, 2u);
  EXPECT_EQ(r.ordered[2].sweep_case.index, 0u);
  const auto scr = std::find_if(r.optima.begin(), r.optima.end(), [](const auto& o) { return o.kpi == "scr"; });
  ASSERT_NE(scr, r.optima.end());
  EXPECT_EQ(scr->best, 0.90005);
  EXPECT_EQ(scr->cases.size(), 2u);
}

TEST(Rank, IsStablePermutation) {
  std::mt19937_64 rng(9);
  std::uniform_int_distribution<int> level(0, 4);
  std::vector<SweepResult> rs;
  for (std::size_t i = 0; i < 80; ++i) rs.push_back(fake(i, 0.5 + 0.1 * level(rng), 0.2, 0.1 * level(rng)));
  const auto r = rank(rs);
  ASSERT_EQ(r.ordered.size(), rs.size());
  auto key = [](const SweepResult& x) { return x.sweep_case.index; };
  std::vector<std::size_t> in_idx, out_idx;
  for (const auto& x : rs) in_idx.push_back(key(x));
  for (const auto& x : r.ordered) out_idx.push_back(key(x));
  std::sort(out_idx.begin(), out_idx.end());
  EXPECT_EQ(in_idx, out_idx);
  for (std::size_t i = 1; i < r.ordered.size(); ++i) {
    const auto& a = r.ordered[i - 1];
    const auto& b = r.ordered[i];
    ASSERT_GE(a.scr, b.scr - 1e-4);
    if (a.scr == b.scr && a.obu == b.obu) EXPECT_LT(key(a), key(b));  // equal priority keeps input order
  }
  EXPECT_EQ(test::code_of([] { rank(std::vector<SweepResult>{}); }), ErrorCode::kRange);
}

}  // namespace
}  // namespace hess
