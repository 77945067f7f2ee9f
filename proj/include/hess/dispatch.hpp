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

#include <array>
#include <functional>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "hess/battery.hpp"
#include "hess/profiles.hpp"

namespace hess {

enum class PolicyId {
  kFixedSplit,      // s1: constant alpha / beta
  kPsocSplit,       // s2: LIB share follows a SOC curve
  kBandSplit,       // s3: LIB takes the +-band, VRFB the remainder
  kSocSweepCase,    // s4: s1 allocation with seasonal SOC windows
  kSingleVrfb,      // s5
  kSingleLib,       // s5
};

std::string_view to_string(PolicyId id) noexcept;
// Accepts both the short ids ("s1", "s5_single_lib") and the long names
// ("s1_fixed_split"). Throws Error(kConfig) for anything else.
PolicyId parse_policy_id(std::string_view text);

// Inclusive SOC window as fractions.
struct SocWindow {
  double soc_min = 0.0;
  double soc_max = 1.0;
  bool operator==(const SocWindow&) const = default;
};

// Summer is April 1 to September 30 on the 365-day calendar.
struct SeasonalWindows {
  SocWindow summer;
  SocWindow winter;
  bool operator==(const SeasonalWindows&) const = default;
};

inline constexpr std::size_t kSummerFirstDay = 90;   // Apr 1, zero-based
inline constexpr std::size_t kSummerEndDay = 273;    // Oct 1, exclusive
constexpr bool is_summer_day(std::size_t day_of_year) noexcept {
  return day_of_year >= kSummerFirstDay && day_of_year < kSummerEndDay;
}

// Piecewise-linear curve over LIB SOC, held flat outside the breakpoints.
struct BetaCurve {
  std::vector<std::pair<double, double>> points;  // (soc, beta), soc ascending

  double operator()(double soc) const;
  bool operator==(const BetaCurve&) const = default;
};

struct ScenarioPolicy {
  PolicyId id = PolicyId::kFixedSplit;
  double alpha = 0.75;    // VRFB share (s1, s4)
  double beta = 0.25;     // LIB share (s1, s4)
  double band_w = 1000.0; // s3
  // s2. Peak share equals the fixed-split LIB share; zero at the SOC ends.
  BetaCurve beta_charge{{{0.5, 0.25}, {0.9, 0.0}}};
  BetaCurve beta_discharge{{{0.1, 0.0}, {0.5, 0.25}}};
  // s4 only. Unset keeps each battery's configured window all year.
  std::optional<PerTech<SeasonalWindows>> seasonal;

  static ScenarioPolicy for_id(PolicyId id);

  bool installed(Tech tech) const noexcept;
  // Throws Error(kConfig).
  void validate() const;

  bool operator==(const ScenarioPolicy&) const = default;
};

/// Net power the EMS asks of the storage: positive is PV surplus to absorb,
/// negative is a deficit to cover. Batteries never charge from the grid.
///
/// PV serves inverter standby before the building load. Standby that PV
/// cannot cover comes from the grid, so a deficit never exceeds the
/// building load.
constexpr double ems_target(double pv_w, double load_w, double standby_w = 0.0) noexcept {
  const double net = pv_w - (load_w + standby_w);
  return net >= 0.0 || -net <= load_w ? net : 0.0 - load_w;
}

/// LIB share for scenario 2 at the given SOC and request direction.
double psoc_beta(const ScenarioPolicy& policy, double p_target_w, double lib_soc);

/// Splits the HESS command between the two batteries. For s1..s4 the two
/// commands sum to p_target bit-exactly.
PerTech<double> allocate(const ScenarioPolicy& policy, double p_target_w, double lib_soc);

/// Power flows of one minute. All values in W, AC side, non-negative.
struct StepRecord {
  double pv = 0.0;
  double load = 0.0;
  double standby = 0.0;
  double pv_to_load = 0.0;
  PerTech<double> pv_to_batt;
  PerTech<double> batt_to_load;
  double grid_import = 0.0;
  double grid_export = 0.0;
  PerTech<double> conversion_loss;

  // pv + import + sum(batt_to_load) - (load + standby + export + sum(pv_to_batt)).
  double balance_residual() const noexcept;
};

struct DispatchOutcome {
  PerTech<BatteryState> states;
  StepRecord record;
};

/// One minute of the EMS priority ladder: PV serves load and standby first,
/// the residual is allocated between the batteries, saturated shares spill to
/// the other battery, and only what is left goes to or comes from the grid.
DispatchOutcome dispatch_step(const ScenarioPolicy& policy, const PerTech<BatterySpec>& specs,
                              const PerTech<BatteryState>& states, double pv_w, double load_w);

// Per-year accumulators in Wh.
struct EnergyLedger {
  int year = 0;
  double pv_wh = 0.0;
  double load_wh = 0.0;  // building load, standby excluded
  double standby_wh = 0.0;
  double pv_to_load_wh = 0.0;
  double import_wh = 0.0;
  double export_wh = 0.0;
  PerTech<double> charge_wh;     // PV to battery
  PerTech<double> discharge_wh;  // battery to load
  PerTech<double> loss_wh;
  // Year-mean of (soc_max - soc_min) * effective capacity and of the
  // effective capacity alone, sampled at the start of every day.
  PerTech<double> mean_usable_capacity_wh;
  PerTech<double> mean_effective_capacity_wh;
  PerTech<bool> installed;
  // Energy folded by minute of day, for time-of-use billing.
  std::vector<double> import_by_minute_of_day;
  std::vector<double> export_by_minute_of_day;
  std::vector<double> load_by_minute_of_day;

  double load_total_wh() const noexcept { return load_wh + standby_wh; }
  double delivered_wh() const noexcept;
  double total_loss_wh() const noexcept { return loss_wh[Tech::kVrfb] + loss_wh[Tech::kLib]; }

  bool operator==(const EnergyLedger&) const = default;
};

struct SimulationInputs {
  MinuteSeries pv = synthetic_pv_profile();
  MinuteSeries load = synthetic_load_profile();
  ScalingPolicy scaling;
  PerTech<BatterySpec> specs{{BatterySpec::vrfb_default(), BatterySpec::lib_default()}};
  AgingParams aging;
  int years = kHorizonYears;
};

struct HorizonResult {
  std::vector<EnergyLedger> ledgers;  // year order
  PerTech<BatteryState> final_states;
};

// Called after every dispatched minute; `minute` is the minute of the year.
using StepObserver = std::function<void(int year, std::size_t minute, const StepRecord&, const PerTech<BatteryState>&)>;

/// Runs `inputs.years` years of one-minute dispatch. Profiles are rescaled
/// per year, daily fade is applied at each day boundary and, for scenario 4,
/// SOC windows switch at the season boundaries. Deterministic.
HorizonResult simulate_horizon(const ScenarioPolicy& policy, const SimulationInputs& inputs,
                               const StepObserver& observer = {});

}  // namespace hess
