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

#include "hess/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hess/error.hpp"

namespace hess {

namespace {

struct PolicyName {
  PolicyId id;
  std::string_view short_name;
  std::string_view long_name;
};

constexpr std::array<PolicyName, 6> kPolicyNames{{
    {PolicyId::kFixedSplit, "s1", "s1_fixed_split"},
    {PolicyId::kPsocSplit, "s2", "s2_psoc_split"},
    {PolicyId::kBandSplit, "s3", "s3_band_split"},
    {PolicyId::kSocSweepCase, "s4", "s4_soc_sweep_case"},
    {PolicyId::kSingleVrfb, "s5_single_vrfb", "s5_single_vrfb"},
    {PolicyId::kSingleLib, "s5_single_lib", "s5_single_lib"},
}};

// Splits `total` into (share * total, remainder) so that the two parts add
// back to `total` exactly. The larger part is rounded, the smaller one is
// the exact difference (Sterbenz).
std::pair<double, double> exact_split(double total, double share) {
  if (share >= 0.5) {
    const double major = share * total;
    return {major, total - major};
  }
  const double major = (1.0 - share) * total;
  return {total - major, major};
}

}  // namespace

std::string_view to_string(PolicyId id) noexcept {
  for (const auto& n : kPolicyNames) {
    if (n.id == id) return n.short_name;
  }
  return "unknown";
}

PolicyId parse_policy_id(std::string_view text) {
  for (const auto& n : kPolicyNames) {
    if (text == n.short_name || text == n.long_name) return n.id;
  }
  throw Error(ErrorCode::kConfig, "unknown scenario id '" + std::string(text) + "'");
}

double BetaCurve::operator()(double soc) const {
  if (points.empty()) return 0.0;
  if (soc <= points.front().first) return points.front().second;
  if (soc >= points.back().first) return points.back().second;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const auto& [x1, y1] = points[i];
    if (soc <= x1) {
      const auto& [x0, y0] = points[i - 1];
      if (x1 == x0) return y1;
      return y0 + (y1 - y0) * (soc - x0) / (x1 - x0);
    }
  }
  return points.back().second;
}

ScenarioPolicy ScenarioPolicy::for_id(PolicyId id) {
  ScenarioPolicy p;
  p.id = id;
  return p;
}

bool ScenarioPolicy::installed(Tech tech) const noexcept {
  switch (id) {
    case PolicyId::kSingleVrfb: return tech == Tech::kVrfb;
    case PolicyId::kSingleLib: return tech == Tech::kLib;
    default: return true;
  }
}

void ScenarioPolicy::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::kConfig, "policy." + what); };
  if (!(alpha >= 0.0 && alpha <= 1.0 && beta >= 0.0 && beta <= 1.0)) fail("alpha/beta: must lie in [0, 1]");
  if (std::abs(alpha + beta - 1.0) > 1e-12) fail("alpha/beta: alpha + beta must equal 1");
  if (!(band_w > 0.0) || !std::isfinite(band_w)) fail("band_w: must be > 0");
  for (const auto* curve : {&beta_charge, &beta_discharge}) {
    const char* name = curve == &beta_charge ? "beta_charge" : "beta_discharge";
    if (curve->points.empty()) fail(std::string(name) + ": needs at least one breakpoint");
    for (std::size_t i = 0; i < curve->points.size(); ++i) {
      const auto [soc, b] = curve->points[i];
      if (!(soc >= 0.0 && soc <= 1.0 && b >= 0.0 && b <= 1.0)) {
        fail(std::string(name) + ": breakpoints must lie in [0, 1] x [0, 1]");
      }
      if (i > 0 && !(soc > curve->points[i - 1].first)) fail(std::string(name) + ": SOC breakpoints must ascend");
    }
  }
  if (seasonal) {
    for (Tech t : kTechs) {
      for (const SocWindow& w : {(*seasonal)[t].summer, (*seasonal)[t].winter}) {
        if (!(w.soc_min >= 0.0 && w.soc_min < w.soc_max && w.soc_max <= 1.0)) {
          fail("seasonal." + std::string(to_string(t)) + ": requires 0 <= soc_min < soc_max <= 1");
        }
      }
    }
  }
}

double psoc_beta(const ScenarioPolicy& policy, double p_target_w, double lib_soc) {
  if (p_target_w > 0.0) return policy.beta_charge(lib_soc);
  if (p_target_w < 0.0) return policy.beta_discharge(lib_soc);
  return 0.0;
}

PerTech<double> allocate(const ScenarioPolicy& policy, double p_target_w, double lib_soc) {
  if (!std::isfinite(p_target_w)) throw Error(ErrorCode::kNumeric, "non-finite HESS power target");
  PerTech<double> cmd;
  switch (policy.id) {
    case PolicyId::kFixedSplit:
    case PolicyId::kSocSweepCase: {
      const auto [lib, vrfb] = exact_split(p_target_w, policy.beta);
      cmd[Tech::kLib] = lib;
      cmd[Tech::kVrfb] = vrfb;
      break;
    }
    case PolicyId::kPsocSplit: {
      const auto [lib, vrfb] = exact_split(p_target_w, psoc_beta(policy, p_target_w, lib_soc));
      cmd[Tech::kLib] = lib;
      cmd[Tech::kVrfb] = vrfb;
      break;
    }
    case PolicyId::kBandSplit: {
      const double lib = std::clamp(p_target_w, -policy.band_w, policy.band_w);
      double vrfb = p_target_w - lib;
      // Beyond twice the band the difference may round; recover the LIB part
      // from it so the pair still sums exactly.
      cmd[Tech::kVrfb] = vrfb;
      cmd[Tech::kLib] = std::abs(p_target_w) > 2.0 * policy.band_w ? p_target_w - vrfb : lib;
      break;
    }
    case PolicyId::kSingleVrfb:
      cmd[Tech::kVrfb] = p_target_w;
      break;
    case PolicyId::kSingleLib:
      cmd[Tech::kLib] = p_target_w;
      break;
  }
  return cmd;
}

double StepRecord::balance_residual() const noexcept {
  const double in = pv + grid_import + batt_to_load[Tech::kVrfb] + batt_to_load[Tech::kLib];
  const double out = load + standby + grid_export + pv_to_batt[Tech::kVrfb] + pv_to_batt[Tech::kLib];
  return in - out;
}

DispatchOutcome dispatch_step(const ScenarioPolicy& policy, const PerTech<BatterySpec>& specs,
                              const PerTech<BatteryState>& states, double pv_w, double load_w) {
  DispatchOutcome out{states, {}};
  StepRecord& rec = out.record;
  rec.pv = pv_w;
  rec.load = load_w;
  for (Tech t : kTechs) {
    if (policy.installed(t)) rec.standby += specs[t].standby_power_w;
  }

  const double load_total = load_w + rec.standby;
  rec.pv_to_load = std::min(pv_w, load_total);
  const double p_target = ems_target(pv_w, load_w, rec.standby);

  const PerTech<double> cmd = allocate(policy, p_target, states[Tech::kLib].soc);

  PerTech<PowerLimits> lim;
  PerTech<double> granted;
  PerTech<double> unserved;
  for (Tech t : kTechs) {
    if (policy.installed(t)) lim[t] = power_limits(specs[t], states[t]);
    granted[t] = std::clamp(cmd[t], -lim[t].discharge_w, lim[t].charge_w);
    unserved[t] = cmd[t] - granted[t];
  }

  // Spill: whatever one battery could not take is offered to the other.
  PerTech<double> final_cmd = granted;
  for (Tech t : kTechs) {
    const Tech other = t == Tech::kVrfb ? Tech::kLib : Tech::kVrfb;
    if (unserved[other] != 0.0 && policy.installed(t)) {
      final_cmd[t] = std::clamp(granted[t] + unserved[other], -lim[t].discharge_w, lim[t].charge_w);
    }
  }

  double delivered = 0.0;
  for (Tech t : kTechs) {
    if (!policy.installed(t) || final_cmd[t] == 0.0) continue;
    const BatteryStep s = step(specs[t], states[t], final_cmd[t], lim[t]);
    out.states[t] = s.state;
    if (s.p_actual_w > 0.0) {
      rec.pv_to_batt[t] = s.p_actual_w;
    } else {
      rec.batt_to_load[t] = -s.p_actual_w;
    }
    rec.conversion_loss[t] = s.loss_wh * 60.0;
    delivered += s.p_actual_w;
  }

  const double residual = (pv_w - load_total) - delivered;
  if (residual > 0.0) {
    rec.grid_export = residual;
  } else if (residual < 0.0) {
    rec.grid_import = -residual;
  }
  return out;
}

double EnergyLedger::delivered_wh() const noexcept {
  return pv_to_load_wh + discharge_wh[Tech::kVrfb] + discharge_wh[Tech::kLib];
}

namespace {

PerTech<BatterySpec> with_windows(PerTech<BatterySpec> specs, const PerTech<SeasonalWindows>& w, bool summer) {
  for (Tech t : kTechs) {
    const SocWindow& win = summer ? w[t].summer : w[t].winter;
    specs[t].soc_min = win.soc_min;
    specs[t].soc_max = win.soc_max;
  }
  return specs;
}

}  // namespace

HorizonResult simulate_horizon(const ScenarioPolicy& policy, const SimulationInputs& inputs,
                               const StepObserver& observer) {
  policy.validate();
  inputs.scaling.validate();
  for (Tech t : kTechs) inputs.specs[t].validate();
  if (inputs.years < 1 || inputs.years > kHorizonYears) {
    throw Error(ErrorCode::kRange, "years must lie in 1.." + std::to_string(kHorizonYears));
  }
  if (inputs.pv.kind() != SeriesKind::kPv || inputs.load.kind() != SeriesKind::kLoad) {
    throw Error(ErrorCode::kConfig, "simulation inputs need a pv and a load series");
  }

  const bool seasonal = policy.id == PolicyId::kSocSweepCase && policy.seasonal.has_value();
  const PerTech<BatterySpec> summer_specs =
      seasonal ? with_windows(inputs.specs, *policy.seasonal, true) : inputs.specs;
  const PerTech<BatterySpec> winter_specs =
      seasonal ? with_windows(inputs.specs, *policy.seasonal, false) : inputs.specs;

  HorizonResult result;
  PerTech<BatteryState> states;
  for (Tech t : kTechs) states[t] = initial_state(inputs.specs[t], inputs.aging);

  for (int year = 1; year <= inputs.years; ++year) {
    const MinuteSeries pv = scale_to_year(inputs.pv, inputs.scaling, year);
    const MinuteSeries load = scale_to_year(inputs.load, inputs.scaling, year);

    EnergyLedger ledger;
    ledger.year = year;
    for (Tech t : kTechs) ledger.installed[t] = policy.installed(t);
    std::vector<double> import_tod(kMinutesPerDay, 0.0);
    std::vector<double> export_tod(kMinutesPerDay, 0.0);
    std::vector<double> load_tod(kMinutesPerDay, 0.0);

    // Sums of W over minutes; converted to Wh once at year end.
    double pv_sum = 0, load_sum = 0, standby_sum = 0, pv_to_load_sum = 0, import_sum = 0, export_sum = 0;
    PerTech<double> charge_sum, discharge_sum, loss_sum, usable_sum, capacity_sum;

    for (std::size_t day = 0; day < kDaysPerYear; ++day) {
      const PerTech<BatterySpec>& specs = is_summer_day(day) ? summer_specs : winter_specs;
      for (Tech t : kTechs) {
        if (!ledger.installed[t]) continue;
        usable_sum[t] += (specs[t].soc_max - specs[t].soc_min) * states[t].effective_capacity_wh;
        capacity_sum[t] += states[t].effective_capacity_wh;
      }

      const std::size_t day_start = day * kMinutesPerDay;
      for (std::size_t m = 0; m < kMinutesPerDay; ++m) {
        const std::size_t i = day_start + m;
        DispatchOutcome o = dispatch_step(policy, specs, states, pv[i], load[i]);
        states = o.states;
        for (Tech t : kTechs) {
          if (ledger.installed[t]) track_soc(states[t]);
        }

        const StepRecord& r = o.record;
        pv_sum += r.pv;
        load_sum += r.load;
        standby_sum += r.standby;
        pv_to_load_sum += r.pv_to_load;
        import_sum += r.grid_import;
        export_sum += r.grid_export;
        for (Tech t : kTechs) {
          charge_sum[t] += r.pv_to_batt[t];
          discharge_sum[t] += r.batt_to_load[t];
          loss_sum[t] += r.conversion_loss[t];
        }
        import_tod[m] += r.grid_import;
        export_tod[m] += r.grid_export;
        load_tod[m] += r.load;

        if (observer) observer(year, i, r, states);
      }

      for (Tech t : kTechs) {
        if (ledger.installed[t]) states[t] = apply_daily_fade(specs[t], states[t], inputs.aging);
      }
    }

    constexpr double kToWh = 1.0 / 60.0;
    ledger.pv_wh = pv_sum * kToWh;
    ledger.load_wh = load_sum * kToWh;
    ledger.standby_wh = standby_sum * kToWh;
    ledger.pv_to_load_wh = pv_to_load_sum * kToWh;
    ledger.import_wh = import_sum * kToWh;
    ledger.export_wh = export_sum * kToWh;
    for (Tech t : kTechs) {
      ledger.charge_wh[t] = charge_sum[t] * kToWh;
      ledger.discharge_wh[t] = discharge_sum[t] * kToWh;
      ledger.loss_wh[t] = loss_sum[t] * kToWh;
      ledger.mean_usable_capacity_wh[t] = usable_sum[t] / static_cast<double>(kDaysPerYear);
      ledger.mean_effective_capacity_wh[t] = capacity_sum[t] / static_cast<double>(kDaysPerYear);
    }
    for (std::size_t m = 0; m < kMinutesPerDay; ++m) {
      import_tod[m] *= kToWh;
      export_tod[m] *= kToWh;
      load_tod[m] *= kToWh;
    }
    ledger.import_by_minute_of_day = std::move(import_tod);
    ledger.export_by_minute_of_day = std::move(export_tod);
    ledger.load_by_minute_of_day = std::move(load_tod);
    result.ledgers.push_back(std::move(ledger));
  }

  result.final_states = states;
  return result;
}

}  // namespace hess
