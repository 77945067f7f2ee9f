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

#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hess/study.hpp"

namespace hess {

enum class UseCase {
  kAllYearVariable,            // uc1
  kWinterVariableSummerFixed,  // uc2
  kWinterFixedSummerVariable,  // uc3
};

std::string_view to_string(UseCase uc) noexcept;
UseCase parse_use_case(std::string_view text);

inline constexpr int kMinDepthOfDischargePct = 40;

// SOC grids, percent.
inline constexpr std::array<int, 4> kLibMinGrid{10, 20, 30, 40};
inline constexpr std::array<int, 5> kLibMaxGrid{50, 60, 70, 80, 90};
inline constexpr std::array<int, 5> kVrfbMinGrid{5, 15, 25, 35, 45};
inline constexpr std::array<int, 5> kVrfbMaxGrid{55, 65, 75, 85, 95};

struct SocRange {
  Tech tech = Tech::kVrfb;
  int min_pct = 0;
  int max_pct = 100;

  int depth_pct() const noexcept { return max_pct - min_pct; }
  SocWindow window() const noexcept { return {min_pct / 100.0, max_pct / 100.0}; }
  bool operator==(const SocRange&) const = default;
};

// Grid pairs with depth of discharge >= 40 %, ordered by (min, max).
std::vector<SocRange> admissible_ranges(Tech tech);

struct SweepCase {
  std::size_t index = 0;
  UseCase use_case = UseCase::kAllYearVariable;
  SocRange vrfb;
  SocRange lib;

  bool operator==(const SweepCase&) const = default;
};

/// Cartesian product of the admissible VRFB and LIB ranges, VRFB-major.
std::vector<SweepCase> enumerate_cases(UseCase use_case);

/// Scenario-4 policy for a case: the variable season(s) take the case's
/// ranges, a fixed season keeps the configured battery windows.
ScenarioPolicy policy_for_case(const SweepCase& c, const StudyInputs& inputs);

struct SweepResult {
  SweepCase sweep_case;
  double scr = 0.0;
  std::optional<double> lcoe;
  PerTech<double> obu;
  double npv = 0.0;
  std::optional<KpiReport> kpis;  // absent when restored from a checkpoint

  bool operator==(const SweepResult&) const = default;
};

struct SweepOptions {
  unsigned workers = 1;
  // Results already on disk; matching cases are not re-simulated.
  std::vector<SweepResult> completed;
  // Invoked once per newly simulated case, serialized, in completion order.
  std::function<void(const SweepResult&)> on_result;
};

/// Simulates every case of a use case with the scenario-1 allocation and
/// returns results ordered by case index.
std::vector<SweepResult> run_sweep(UseCase use_case, const StudyInputs& inputs, const SweepOptions& options = {});

enum class SecondaryKpi { kObu, kLcoe };

std::string_view to_string(SecondaryKpi k) noexcept;
SecondaryKpi parse_secondary_kpi(std::string_view text);

struct KpiOptimum {
  std::string kpi;  // "scr", "lcoe", "obu_vrfb", "obu_lib"
  double best = 0.0;
  std::vector<SweepCase> cases;  // every case within tolerance of the best
};

struct Ranking {
  std::vector<SweepResult> ordered;
  std::vector<KpiOptimum> optima;
};

/// Orders by SCR descending; runs of SCR values within `tolerance` of the
/// run's leader are re-ordered by the secondary KPI ascending (OBU is the
/// sum over both batteries). Both sorts are stable.
/// Throws Error(kRange) for an empty input.
Ranking rank(std::span<const SweepResult> results, SecondaryKpi secondary = SecondaryKpi::kObu,
             double tolerance = 1e-4);

}  // namespace hess
