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

#include "hess/config.hpp"
#include "hess/reports.hpp"
#include "hess/runner.hpp"
#include "support.hpp"

namespace hess {
namespace {

using test::slurp;
using test::TempDir;

RunConfig short_run(const std::filesystem::path& out, unsigned workers) {
  RunConfig c = parse_config(R"({"years":1})");
  c.output_dir = out;
  c.workers = workers;
  return c;
}

TEST(Runner, WritesEveryArtifact) {
  TempDir dir;
  auto c = short_run(dir.path, 2);
  c.scenarios = {PolicyId::kFixedSplit, PolicyId::kSingleLib};
  c.trace = true;
  const auto r = run(c);
  ASSERT_EQ(r.outcomes.size(), 2u);
  for (const char* f : {"ledger_s1.csv", "ledger_s5_single_lib.csv", "kpi.json", "kpi.csv", "economics.json",
                        "economics.csv", "trace_s1.csv", "manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path / f)) << f;
  }
  EXPECT_EQ(render_csv(slurp(dir.path / "kpi.json")), slurp(dir.path / "kpi.csv"));
  EXPECT_EQ(render_csv(slurp(dir.path / "economics.json")), slurp(dir.path / "economics.csv"));
  const auto trace = slurp(dir.path / "trace_s1.csv");
  EXPECT_EQ(std::count(trace.begin(), trace.end(), '\n'), static_cast<long>(kMinutesPerYear) + 1);
  EXPECT_EQ(r.outcomes[1].horizon.ledgers[0].discharge_wh[Tech::kVrfb], 0.0);
}

TEST(Runner, OutputIndependentOfWorkerCount) {
  TempDir a, b;
  const auto ra = run(short_run(a.path, 1));
  const auto rb = run(short_run(b.path, 5));
  ASSERT_EQ(ra.files, rb.files);
  for (const auto& f : ra.files) {
    if (f == "manifest.json") continue;
    EXPECT_EQ(slurp(a.path / f), slurp(b.path / f)) << f;
  }
}

TEST(Runner, EffectiveWorkers) {
  EXPECT_EQ(effective_workers(4, 2), 2u);
  EXPECT_EQ(effective_workers(3, 266), 3u);
  EXPECT_GE(effective_workers(0, 266), 1u);
  EXPECT_EQ(effective_workers(8, 0), 1u);
}

TEST(Runner, SweepResumesFromCheckpoint) {
  TempDir dir;
  auto c = short_run(dir.path, 2);
  c.sweep.use_cases = {UseCase::kWinterVariableSummerFixed};
  // Pretend an earlier run finished every case but three.
  const auto cases = enumerate_cases(UseCase::kWinterVariableSummerFixed);
  std::string checkpoint = "# config " + config_hash(c) + "\n";
  for (const auto& sc : cases) {
    if (sc.index == 3 || sc.index == 100 || sc.index == 265) continue;
    SweepResult r;
    r.sweep_case = sc;
    r.scr = 0.25;
    r.lcoe = 1.5;
    checkpoint += sweep_csv_row(r);
  }
  checkpoint += "uc2,5,55,10";  // torn final row
  std::filesystem::create_directories(dir.path);
  write_file_atomic(dir.path / "sweep_uc2.partial.csv", checkpoint);

  const auto s = sweep(c);
  ASSERT_EQ(s.use_cases.size(), 1u);
  EXPECT_EQ(s.use_cases[0].resumed, 263u);
  EXPECT_EQ(s.use_cases[0].results.size(), 266u);
  EXPECT_GT(s.use_cases[0].results[100].scr, 0.25);
  EXPECT_FALSE(std::filesystem::exists(dir.path / "sweep_uc2.partial.csv"));
  const auto csv = slurp(dir.path / "sweep_uc2.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 267);
  for (const char* f : {"sweep_uc2_ranking.json", "sweep_uc2_ranking.csv", "sweep_summary.json", "sweep_manifest.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir.path / f)) << f;
  }
}

}  // namespace
}  // namespace hess
