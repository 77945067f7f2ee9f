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

#include "hess/kpi.hpp"

#include <string>

#include "hess/error.hpp"

namespace hess {

std::string_view to_string(ObuNormalization n) noexcept {
  return n == ObuNormalization::kEffectiveCapacity ? "capacity" : "usable-window";
}

ObuNormalization parse_obu_normalization(std::string_view text) {
  if (text == "capacity") return ObuNormalization::kEffectiveCapacity;
  if (text == "usable-window") return ObuNormalization::kUsableWindow;
  throw Error(ErrorCode::kConfig, "unknown OBU normalization '" + std::string(text) + "'");
}

std::string kpi_formula_version(const KpiOptions& options) {
  return "kpi-1;obu=" + std::string(to_string(options.obu));
}

KpiReport annual_kpis(const EnergyLedger& ledger, const KpiOptions& options) {
  KpiReport k;
  const double pv = ledger.pv_wh;
  const double load = ledger.load_total_wh();
  const std::string year = "year " + std::to_string(ledger.year);

  if (pv > 0.0) {
    k.scr = (pv - ledger.export_wh) / pv;
    for (Tech t : kTechs) k.tbu[t] = ledger.charge_wh[t] / pv;
  } else {
    k.scr = 1.0;
    k.notes.push_back(year + ": no PV generation; SCR=1, TGU=0, TBU=0");
  }
  k.tgu = 1.0 - k.scr;

  if (load > 0.0) {
    k.ssr = (load - ledger.import_wh) / load;
    for (Tech t : kTechs) k.fbu[t] = ledger.discharge_wh[t] / load;
  } else {
    k.ssr = 1.0;
    k.notes.push_back(year + ": no consumption; SSR=1, FGU=0, FBU=0");
  }
  k.fgu = 1.0 - k.ssr;

  const double exchanged_basis = load + pv;
  k.grf = exchanged_basis > 0.0 ? 1.0 - (ledger.import_wh + ledger.export_wh) / exchanged_basis : 1.0;

  for (Tech t : kTechs) {
    const double basis = options.obu == ObuNormalization::kUsableWindow ? ledger.mean_usable_capacity_wh[t]
                                                                        : ledger.mean_effective_capacity_wh[t];
    k.obu[t] = (ledger.installed[t] && basis > 0.0) ? ledger.discharge_wh[t] / (365.0 * basis) : 0.0;
  }
  k.eg_kwh = ledger.import_wh / 1000.0;
  return k;
}

namespace {

// Shifted mean: exact when every value equals the first.
template <class Get>
double mean_of(std::span<const KpiReport> years, Get get) {
  const double ref = get(years.front());
  double acc = 0.0;
  for (const auto& y : years) acc += get(y) - ref;
  return ref + acc / static_cast<double>(years.size());
}

}  // namespace

KpiReport compute_kpis(std::span<const EnergyLedger> ledgers, const KpiOptions& options) {
  if (ledgers.empty()) throw Error(ErrorCode::kRange, "compute_kpis needs at least one ledger");
  std::vector<KpiReport> years;
  years.reserve(ledgers.size());
  for (const auto& l : ledgers) years.push_back(annual_kpis(l, options));

  KpiReport r;
  r.scr = mean_of(years, [](const KpiReport& k) { return k.scr; });
  r.ssr = mean_of(years, [](const KpiReport& k) { return k.ssr; });
  r.grf = mean_of(years, [](const KpiReport& k) { return k.grf; });
  r.eg_kwh = mean_of(years, [](const KpiReport& k) { return k.eg_kwh; });
  for (Tech t : kTechs) {
    r.obu[t] = mean_of(years, [t](const KpiReport& k) { return k.obu[t]; });
    r.fbu[t] = mean_of(years, [t](const KpiReport& k) { return k.fbu[t]; });
    r.tbu[t] = mean_of(years, [t](const KpiReport& k) { return k.tbu[t]; });
  }
  r.tgu = 1.0 - r.scr;
  r.fgu = 1.0 - r.ssr;
  for (const auto& y : years) r.notes.insert(r.notes.end(), y.notes.begin(), y.notes.end());
  return r;
}

}  // namespace hess
