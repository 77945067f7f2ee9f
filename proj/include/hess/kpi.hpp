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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hess/dispatch.hpp"

namespace hess {

// Denominator of the battery-use indicator.
enum class ObuNormalization {
  kEffectiveCapacity,  // discharge / (365 * effective capacity)
  kUsableWindow,       // discharge / (365 * (soc_max - soc_min) * effective capacity)
};

std::string_view to_string(ObuNormalization n) noexcept;
ObuNormalization parse_obu_normalization(std::string_view text);

/// Energy indicators. Fractions unless noted.
///
///   SCR = (E_pv - E_export) / E_pv            TGU = 1 - SCR  (= E_export / E_pv)
///   SSR = (E_load - E_import) / E_load        FGU = 1 - SSR  (= E_import / E_load)
///   GRF = 1 - (E_import + E_export) / (E_load + E_pv)
///   FBU_b = E_discharge_b / E_load            TBU_b = E_charge_b / E_pv
///   OBU_b = E_discharge_b / (365 * capacity basis), see ObuNormalization
///   EG = E_import in kWh
///
/// E_load includes inverter standby. Horizon values are the arithmetic mean of
/// the annual values.
struct KpiReport {
  double scr = 0.0;
  double ssr = 0.0;
  double grf = 0.0;
  double fgu = 0.0;
  double tgu = 0.0;
  PerTech<double> obu;
  PerTech<double> fbu;
  PerTech<double> tbu;
  double eg_kwh = 0.0;
  std::vector<std::string> notes;  // degenerate-input remarks, one per event

  bool operator==(const KpiReport&) const = default;
};

struct KpiOptions {
  ObuNormalization obu = ObuNormalization::kEffectiveCapacity;
};

std::string kpi_formula_version(const KpiOptions& options);

KpiReport annual_kpis(const EnergyLedger& ledger, const KpiOptions& options = {});

/// Throws Error(kRange) for an empty ledger list.
KpiReport compute_kpis(std::span<const EnergyLedger> ledgers, const KpiOptions& options = {});

}  // namespace hess
