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

#include <random>

#include "hess/kpi.hpp"
#include "support.hpp"

namespace hess {
namespace {

constexpr Tech V = Tech::kVrfb;
constexpr Tech L = Tech::kLib;

EnergyLedger ledger(double pv, double load, double import, double export_) {
  EnergyLedger l;
  l.year = 1;
  l.pv_wh = pv;
  l.load_wh = load;
  l.import_wh = import;
  l.export_wh = export_;
  l.installed = {{true, true}};
  l.mean_effective_capacity_wh = {{60000.0, 9800.0}};
  l.mean_usable_capacity_wh = {{54000.0, 7840.0}};
  return l;
}

TEST(Kpi, IslandYearIsAllOnes) {
  const auto k = annual_kpis(ledger(5e6, 5e6, 0.0, 0.0));
  EXPECT_EQ(k.scr, 1.0);
  EXPECT_EQ(k.ssr, 1.0);
  EXPECT_EQ(k.grf, 1.0);
  EXPECT_EQ(k.fgu, 0.0);
  EXPECT_EQ(k.tgu, 0.0);
}

TEST(Kpi, PassThroughHasZeroScr) {
  const auto k = annual_kpis(ledger(4e6, 3e6, 3e6, 4e6));
  EXPECT_EQ(k.scr, 0.0);
  EXPECT_EQ(k.tgu, 1.0);
  EXPECT_EQ(k.grf, 0.0);
}

TEST(Kpi, ScrFromExportShare) {
  const auto k = annual_kpis(ledger(10e6, 8e6, 1e6, 1.52e6));
  EXPECT_NEAR(k.scr, 0.848, 1e-15);
  EXPECT_NEAR(k.ssr, 0.875, 1e-15);
  EXPECT_EQ(k.eg_kwh, 1000.0);
}

TEST(Kpi, DegenerateInputsAreNoted) {
  const auto k = annual_kpis(ledger(0.0, 1e6, 1e6, 0.0));
  EXPECT_EQ(k.scr, 1.0);
  EXPECT_EQ(k.tgu, 0.0);
  EXPECT_EQ(k.tbu[L], 0.0);
  ASSERT_EQ(k.notes.size(), 1u);
  const auto n = annual_kpis(ledger(1e6, 0.0, 0.0, 1e6));
  EXPECT_EQ(n.ssr, 1.0);
  EXPECT_EQ(n.fgu, 0.0);
  EXPECT_EQ(n.notes.size(), 1u);
}

TEST(Kpi, ComplementsAreExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> e(0.0, 1e7);
  for (int i = 0; i < 10000; ++i) {
    const double pv = e(rng) + 1.0, load = e(rng) + 1.0;
    std::uniform_real_distribution<double> ex(0.0, pv), im(0.0, load);
    const auto k = annual_kpis(ledger(pv, load, im(rng), ex(rng)));
    ASSERT_EQ(k.scr + k.tgu, 1.0);
    ASSERT_EQ(k.ssr + k.fgu, 1.0);
    ASSERT_GE(k.grf, 0.0);
    ASSERT_LE(k.grf, 1.0);
  }
}

TEST(Kpi, GrfIsOneIffNoExchange) {
  EXPECT_EQ(annual_kpis(ledger(1e6, 1e6, 0.0, 0.0)).grf, 1.0);
  EXPECT_LT(annual_kpis(ledger(1e6, 1e6, 1.0, 0.0)).grf, 1.0);
  EXPECT_LT(annual_kpis(ledger(1e6, 1e6, 0.0, 1.0)).grf, 1.0);
}

TEST(Kpi, ScrDecreasesWithExport) {
  double prev = 2.0;
  for (double ex = 0.0; ex <= 1e6; ex += 1e5) {
    const double scr = annual_kpis(ledger(1e6, 1e6, 0.0, ex)).scr;
    EXPECT_LT(scr, prev);
    prev = scr;
  }
}

TEST(Kpi, BatteryIndicators) {
  auto l = ledger(1e7, 8e6, 1e6, 1e6);
  l.charge_wh = {{2e6, 5e5}};
  l.discharge_wh = {{1.5e6, 4.75e5}};
  const auto k = annual_kpis(l);
  EXPECT_DOUBLE_EQ(k.tbu[V], 0.2);
  EXPECT_DOUBLE_EQ(k.fbu[L], 4.75e5 / 8e6);
  EXPECT_DOUBLE_EQ(k.obu[L], 4.75e5 / (365.0 * 9800.0));
  const auto w = annual_kpis(l, {ObuNormalization::kUsableWindow});
  EXPECT_DOUBLE_EQ(w.obu[L], 4.75e5 / (365.0 * 7840.0));
  l.installed[V] = false;
  EXPECT_EQ(annual_kpis(l).obu[V], 0.0);
}

TEST(Kpi, HorizonIsMeanAndLinear) {
  std::vector<EnergyLedger> ls;
  for (int y = 0; y < 15; ++y) ls.push_back(ledger(1e7 - y * 1e5, 8e6 + y * 1e5, 1e6 + y * 2e4, 1.5e6));
  const auto h = compute_kpis(ls);
  double scr = 0.0, ssr = 0.0;
  for (const auto& l : ls) {
    scr += annual_kpis(l).scr;
    ssr += annual_kpis(l).ssr;
  }
  EXPECT_NEAR(h.scr, scr / 15.0, 1e-15);
  EXPECT_NEAR(h.ssr, ssr / 15.0, 1e-15);
  EXPECT_EQ(h.scr + h.tgu, 1.0);
  // Identical years average to the annual value exactly.
  const std::vector<EnergyLedger> same(15, ls[3]);
  EXPECT_EQ(compute_kpis(same).scr, annual_kpis(ls[3]).scr);
  EXPECT_EQ(test::code_of([] { compute_kpis({}); }), ErrorCode::kRange);
}

TEST(Kpi, FormulaVersionNamesNormalization) {
  EXPECT_EQ(kpi_formula_version({}), "kpi-1;obu=capacity");
  EXPECT_EQ(parse_obu_normalization("usable-window"), ObuNormalization::kUsableWindow);
  EXPECT_EQ(test::code_of([] { parse_obu_normalization("x"); }), ErrorCode::kConfig);
}

}  // namespace
}  // namespace hess
