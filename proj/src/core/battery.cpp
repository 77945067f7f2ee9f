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

#include "hess/battery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hess/error.hpp"

namespace hess {

std::string_view to_string(Tech tech) noexcept {
  return tech == Tech::kVrfb ? "vrfb" : "lib";
}

BatterySpec BatterySpec::vrfb_default() {
  BatterySpec s;
  s.tech = Tech::kVrfb;
  s.energy_capacity_nominal_wh = 60000.0;
  s.p_charge_max_w = 5000.0;
  s.p_discharge_max_w = 5000.0;
  s.soc_min = 0.05;
  s.soc_max = 0.95;
  s.soc_initial = 0.50;
  s.eta_charge = std::sqrt(0.75);
  s.eta_discharge = std::sqrt(0.75);
  s.standby_power_w = 30.0;
  s.capacity_fade_rate = 0.0;
  s.calendar_fade = false;
  return s;
}

BatterySpec BatterySpec::lib_default() {
  BatterySpec s;
  s.tech = Tech::kLib;
  s.energy_capacity_nominal_wh = 9800.0;
  s.p_charge_max_w = 3300.0;
  s.p_discharge_max_w = 3300.0;
  s.soc_min = 0.10;
  s.soc_max = 0.90;
  s.soc_initial = 0.50;
  s.eta_charge = std::sqrt(0.95);
  s.eta_discharge = std::sqrt(0.95);
  s.standby_power_w = 5.0;
  s.capacity_fade_rate = 0.0;
  s.calendar_fade = true;
  return s;
}

void BatterySpec::validate() const {
  const std::string prefix = std::string(to_string(tech)) + ".";
  auto fail = [&](const char* field, const char* why) {
    throw Error(ErrorCode::kConfig, prefix + field + ": " + why);
  };
  if (!(energy_capacity_nominal_wh > 0.0)) fail("energy_capacity_wh", "must be > 0");
  if (!(p_charge_max_w > 0.0)) fail("p_charge_max_w", "must be > 0");
  if (!(p_discharge_max_w > 0.0)) fail("p_discharge_max_w", "must be > 0");
  if (!(soc_min >= 0.0 && soc_min < soc_initial && soc_initial < soc_max && soc_max <= 1.0)) {
    fail("soc_initial", "requires 0 <= soc_min < soc_initial < soc_max <= 1");
  }
  if (!(eta_charge > 0.0 && eta_charge <= 1.0)) fail("eta_charge", "must lie in (0, 1]");
  if (!(eta_discharge > 0.0 && eta_discharge <= 1.0)) fail("eta_discharge", "must lie in (0, 1]");
  if (!(standby_power_w >= 0.0)) fail("standby_power_w", "must be >= 0");
  if (!(capacity_fade_rate >= 0.0 && capacity_fade_rate < 1.0)) fail("capacity_fade_rate", "must lie in [0, 1)");
  if (!(taper_band >= 0.0 && taper_band <= 0.5)) fail("taper_band", "must lie in [0, 0.5]");
}

BatteryState initial_state(const BatterySpec& spec, const AgingParams& aging) {
  BatteryState s;
  s.soc = spec.soc_initial;
  s.q = spec.calendar_fade ? aging.q0 : 1.0;
  s.effective_capacity_wh = std::min(s.q, 1.0) * spec.energy_capacity_nominal_wh;
  return s;
}

namespace {

double taper(double gap, double band) {
  if (gap <= 0.0) return 0.0;
  if (band <= 0.0) return 1.0;
  return std::min(1.0, gap / band);
}

}  // namespace

PowerLimits power_limits(const BatterySpec& spec, const BatteryState& state, double dt_minutes) {
  const double hours = dt_minutes / 60.0;
  const double up_gap = spec.soc_max - state.soc;
  const double down_gap = state.soc - spec.soc_min;

  PowerLimits lim;
  lim.charge_w = spec.p_charge_max_w * taper(up_gap, spec.taper_band);
  lim.discharge_w = spec.p_discharge_max_w * taper(down_gap, spec.taper_band);

  const double room_wh = std::max(0.0, up_gap) * state.effective_capacity_wh;
  const double stock_wh = std::max(0.0, down_gap) * state.effective_capacity_wh;
  lim.charge_w = std::min(lim.charge_w, room_wh / (spec.eta_charge * hours));
  lim.discharge_w = std::min(lim.discharge_w, stock_wh * spec.eta_discharge / hours);
  return lim;
}

BatteryStep step(const BatterySpec& spec, const BatteryState& state, double p_command_w, double dt_minutes) {
  if (p_command_w == 0.0) return {state, 0.0, 0.0};
  return step(spec, state, p_command_w, power_limits(spec, state, dt_minutes), dt_minutes);
}

BatteryStep step(const BatterySpec& spec, const BatteryState& state, double p_command_w, const PowerLimits& lim,
                 double dt_minutes) {
  if (!std::isfinite(p_command_w)) throw Error(ErrorCode::kNumeric, "non-finite battery power command");

  BatteryStep out{state, 0.0, 0.0};
  if (p_command_w == 0.0) return out;

  const double p = std::clamp(p_command_w, -lim.discharge_w, lim.charge_w);
  if (p == 0.0) return out;

  const double ac_wh = p * dt_minutes / 60.0;
  const double dc_wh = p > 0.0 ? ac_wh * spec.eta_charge : ac_wh / spec.eta_discharge;
  double soc = state.soc + dc_wh / state.effective_capacity_wh;
  // The headroom clamp can leave a rounding-sized overshoot.
  if (p > 0.0 && state.soc <= spec.soc_max) soc = std::min(soc, spec.soc_max);
  if (p < 0.0 && state.soc >= spec.soc_min) soc = std::max(soc, spec.soc_min);

  out.state.soc = soc;
  if (p > 0.0) {
    out.state.throughput_charge_wh += ac_wh;
  } else {
    out.state.throughput_discharge_wh -= ac_wh;
  }
  out.p_actual_w = p;
  out.loss_wh = std::abs(ac_wh - dc_wh);
  return out;
}

void track_soc(BatteryState& state, double dt_minutes) noexcept {
  state.soc_day_accumulator += state.soc * dt_minutes;
  state.soc_day_minutes += dt_minutes;
}

double calendar_kcal(const AgingParams& params, double soc_mean) {
  const double t = params.ambient_k;
  if (!(t > 0.0) || !(params.t_ref_k > 0.0)) throw Error(ErrorCode::kDomain, "temperature must be > 0 K");
  if (!(soc_mean >= 0.0 && soc_mean <= 1.0)) throw Error(ErrorCode::kRange, "mean SOC must lie in [0, 1]");
  const double inv_ref = 1.0 / params.t_ref_k;
  // The SOC term divides by T as the model is published.
  return params.a * std::exp(params.b * (1.0 / t - inv_ref)) * std::exp(params.c * (soc_mean / t - inv_ref));
}

double lib_calendar_fade(const AgingParams& params, double t_days, double soc_mean) {
  if (!(t_days >= 0.0)) throw Error(ErrorCode::kRange, "elapsed time must be >= 0 days");
  return params.q0 - calendar_kcal(params, soc_mean) * std::sqrt(t_days);
}

BatteryState apply_daily_fade(const BatterySpec& spec, const BatteryState& state, const AgingParams& params) {
  BatteryState s = state;
  const long d = state.elapsed_days + 1;
  s.elapsed_days = d;

  if (spec.calendar_fade) {
    const double soc_mean =
        state.soc_day_minutes > 0.0 ? state.soc_day_accumulator / state.soc_day_minutes : state.soc;
    const double kcal = calendar_kcal(params, std::clamp(soc_mean, 0.0, 1.0));
    // sqrt(d) - sqrt(d - 1), written without the cancellation.
    const double root_step = 1.0 / (std::sqrt(static_cast<double>(d)) + std::sqrt(static_cast<double>(d - 1)));
    s.q = state.q - kcal * root_step;
    s.effective_capacity_wh = std::min(s.q, 1.0) * spec.energy_capacity_nominal_wh;
  } else if (spec.capacity_fade_rate > 0.0) {
    s.q = std::max(1e-6, 1.0 - spec.capacity_fade_rate * static_cast<double>(d) / 365.0);
    s.effective_capacity_wh = s.q * spec.energy_capacity_nominal_wh;
  }

  s.soc_day_accumulator = 0.0;
  s.soc_day_minutes = 0.0;
  return s;
}

}  // namespace hess
