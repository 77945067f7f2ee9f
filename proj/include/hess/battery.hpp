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
#include <cstddef>
#include <string_view>

namespace hess {

enum class Tech { kVrfb = 0, kLib = 1 };

inline constexpr std::array<Tech, 2> kTechs{Tech::kVrfb, Tech::kLib};

std::string_view to_string(Tech tech) noexcept;

// Indexed by Tech.
template <class T>
struct PerTech {
  std::array<T, 2> items{};

  T& operator[](Tech t) noexcept { return items[static_cast<std::size_t>(t)]; }
  const T& operator[](Tech t) const noexcept { return items[static_cast<std::size_t>(t)]; }
  bool operator==(const PerTech&) const = default;
};

// LIB cell resistance carried for reference. The energy-domain model has no
// voltage state, so nothing reads it.
inline constexpr double kLibCellResistanceOhm = 0.001155;

/// Static ratings and operating envelope of one battery + inverter.
///
/// Efficiencies are one-way and AC-referred: charging stores
/// `p * eta_charge`, discharging draws `p / eta_discharge` from the cells.
/// VRFB pump losses are folded into its efficiencies. Standby power is the
/// inverter idle draw and is booked by the dispatcher, not here.
struct BatterySpec {
  Tech tech = Tech::kVrfb;
  double energy_capacity_nominal_wh = 0.0;
  double p_charge_max_w = 0.0;
  double p_discharge_max_w = 0.0;
  double soc_min = 0.0;
  double soc_max = 1.0;
  double soc_initial = 0.5;
  double eta_charge = 1.0;
  double eta_discharge = 1.0;
  double standby_power_w = 0.0;
  // Linear fade per year for technologies without a calendar model.
  double capacity_fade_rate = 0.0;
  // True selects the square-root-of-time calendar fade model.
  bool calendar_fade = false;
  // SOC width over which power tapers linearly to zero at each bound.
  double taper_band = 0.10;

  static BatterySpec vrfb_default();
  static BatterySpec lib_default();

  // Throws Error(kConfig) naming the offending field.
  void validate() const;

  bool operator==(const BatterySpec&) const = default;
};

/// Calendar fade coefficients: q = q0 - kcal * sqrt(days), with
/// kcal = a * exp(b (1/T - 1/T_ref)) * exp(c (SOC/T - 1/T_ref)).
struct AgingParams {
  double a = 0.00266;   // 1/sqrt(day)
  double b = -7280.0;   // K
  double c = 930.0;     // K
  double t_ref_k = 296.0;
  double q0 = 1.02;
  double ambient_k = 296.15;  // 23 degC, air-conditioned room

  bool operator==(const AgingParams&) const = default;
};

struct BatteryState {
  double soc = 0.5;
  double q = 1.0;  // capacity fraction from the fade model; starts at q0
  double effective_capacity_wh = 0.0;
  long elapsed_days = 0;
  double soc_day_accumulator = 0.0;  // sum of soc * minutes for the current day
  double soc_day_minutes = 0.0;
  double throughput_charge_wh = 0.0;     // AC side
  double throughput_discharge_wh = 0.0;  // AC side

  bool operator==(const BatteryState&) const = default;
};

BatteryState initial_state(const BatterySpec& spec, const AgingParams& aging);

struct PowerLimits {
  double charge_w = 0.0;
  double discharge_w = 0.0;
};

/// AC-side power available in each direction for a step of `dt_minutes`.
///
/// Both directions taper linearly from full rating to zero across the last
/// `taper_band` of SOC before the bound, then are clamped so one step cannot
/// carry SOC past the bound. A battery sitting outside its bounds (after a
/// seasonal range change) gets zero power in the direction that would move
/// it further out.
PowerLimits power_limits(const BatterySpec& spec, const BatteryState& state, double dt_minutes = 1.0);

struct BatteryStep {
  BatteryState state;
  double p_actual_w = 0.0;  // signed, positive = charging
  double loss_wh = 0.0;     // |AC energy - DC energy|
};

/// Executes a signed AC power command (positive charges) for `dt_minutes`.
/// Throws Error(kNumeric) for a non-finite command.
BatteryStep step(const BatterySpec& spec, const BatteryState& state, double p_command_w, double dt_minutes = 1.0);

/// Same, with limits already computed by power_limits for this state and dt.
BatteryStep step(const BatterySpec& spec, const BatteryState& state, double p_command_w, const PowerLimits& limits,
                 double dt_minutes = 1.0);

/// Adds the current SOC to today's SOC-minute accumulator.
void track_soc(BatteryState& state, double dt_minutes = 1.0) noexcept;

/// Calendar stress factor kcal in 1/sqrt(day) at ambient temperature.
double calendar_kcal(const AgingParams& params, double soc_mean);

/// Closed-form capacity fraction after `t_days` at constant mean SOC.
/// Throws Error(kDomain) when the temperature is not positive and
/// Error(kRange) for negative time or SOC outside [0, 1].
double lib_calendar_fade(const AgingParams& params, double t_days, double soc_mean);

/// Day-boundary update: advances the day counter, applies the fade increment
/// for the day just ended using its mean SOC, refreshes the effective capacity
/// and resets the accumulator.
BatteryState apply_daily_fade(const BatterySpec& spec, const BatteryState& state, const AgingParams& params);

}  // namespace hess
