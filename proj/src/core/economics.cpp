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

#include "hess/economics.hpp"

#include <cmath>
#include <string>

#include "hess/error.hpp"

namespace hess {

std::string_view to_string(SystemConfig c) noexcept {
  switch (c) {
    case SystemConfig::kHess: return "hess";
    case SystemConfig::kVrfbOnly: return "vrfb_only";
    case SystemConfig::kLibOnly: return "lib_only";
  }
  return "unknown";
}

SystemConfig system_for(PolicyId id) noexcept {
  switch (id) {
    case PolicyId::kSingleVrfb: return SystemConfig::kVrfbOnly;
    case PolicyId::kSingleLib: return SystemConfig::kLibOnly;
    default: return SystemConfig::kHess;
  }
}

bool Tariff::is_offpeak(int minute_of_day) const noexcept {
  if (offpeak_start_minute == offpeak_end_minute) return false;
  if (offpeak_start_minute < offpeak_end_minute) {
    return minute_of_day >= offpeak_start_minute && minute_of_day < offpeak_end_minute;
  }
  return minute_of_day >= offpeak_start_minute || minute_of_day < offpeak_end_minute;
}

double Tariff::offpeak_fraction() const noexcept {
  int n = 0;
  for (int m = 0; m < static_cast<int>(kMinutesPerDay); ++m) n += is_offpeak(m) ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(kMinutesPerDay);
}

void Tariff::validate() const {
  if (!(fixed_daily >= 0.0 && price_peak >= 0.0 && price_offpeak >= 0.0 && export_price >= 0.0)) {
    throw Error(ErrorCode::kConfig, "tariff: prices must be >= 0");
  }
  const int day = static_cast<int>(kMinutesPerDay);
  if (offpeak_start_minute < 0 || offpeak_start_minute >= day || offpeak_end_minute < 0 || offpeak_end_minute >= day) {
    throw Error(ErrorCode::kConfig, "tariff: off-peak window bounds must be minutes of day in [0, 1440)");
  }
}

double CostTable::opex(SystemConfig config) const noexcept {
  return config == SystemConfig::kLibOnly ? opex_lib_only : opex_per_year;
}

double CostTable::replacement(SystemConfig config) const noexcept {
  switch (config) {
    case SystemConfig::kHess: return lib + vrfb;
    case SystemConfig::kVrfbOnly: return vrfb;
    case SystemConfig::kLibOnly: return lib;
  }
  return 0.0;
}

void CostTable::validate() const {
  for (double v : {module_price_per_wp, pv_wp, inverter_pv_a, inverter_pv_b, lib, lib_inverter, vrfb, vrfb_inverter,
                   cabling_hess, cabling_single, opex_per_year, opex_lib_only}) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw Error(ErrorCode::kConfig, "costs: line items must be finite and >= 0");
  }
  if (vrfb_inverter_count < 0) throw Error(ErrorCode::kConfig, "costs: vrfb_inverter_count must be >= 0");
}

void Rates::validate() const {
  if (!(discount > -1.0)) throw Error(ErrorCode::kConfig, "rates: discount must be > -1");
  if (!(inflation > -1.0) || !(energy_escalation > -1.0)) {
    throw Error(ErrorCode::kConfig, "rates: inflation and energy escalation must be > -1");
  }
  if (horizon < 1) throw Error(ErrorCode::kConfig, "rates: horizon must be >= 1");
  if (replacement_year < 1) throw Error(ErrorCode::kConfig, "rates: replacement_year must be >= 1");
}

double total_investment(const CostTable& cost, SystemConfig config) {
  double total = cost.pv_modules() + cost.inverter_pv_a + cost.inverter_pv_b;
  if (config != SystemConfig::kVrfbOnly) total += cost.lib + cost.lib_inverter;
  if (config != SystemConfig::kLibOnly) total += cost.vrfb + cost.vrfb_inverters();
  total += config == SystemConfig::kHess ? cost.cabling_hess : cost.cabling_single;
  return total;
}

namespace {

double fixed_term(const Tariff& tariff) {
  return static_cast<double>(kDaysPerYear) * tariff.fixed_daily;
}

double average_price(const Tariff& tariff) {
  const double f = tariff.offpeak_fraction();
  return f * tariff.price_offpeak + (1.0 - f) * tariff.price_peak;
}

double price_by_time_of_day(std::span<const double> wh_by_minute, const Tariff& tariff) {
  double peak_wh = 0.0;
  double offpeak_wh = 0.0;
  for (std::size_t m = 0; m < wh_by_minute.size(); ++m) {
    (tariff.is_offpeak(static_cast<int>(m)) ? offpeak_wh : peak_wh) += wh_by_minute[m];
  }
  return peak_wh / 1000.0 * tariff.price_peak + offpeak_wh / 1000.0 * tariff.price_offpeak;
}

}  // namespace

Bill annual_bill(const EnergyLedger& ledger, const Tariff& tariff) {
  Bill bill;
  if (ledger.import_by_minute_of_day.size() == kMinutesPerDay) {
    bill.import_cost = price_by_time_of_day(ledger.import_by_minute_of_day, tariff);
  } else {
    bill.import_cost = ledger.import_wh / 1000.0 * average_price(tariff);
    bill.fallback = true;
  }
  bill.import_cost += fixed_term(tariff);
  bill.export_revenue = ledger.export_wh / 1000.0 * tariff.export_price;
  return bill;
}

Bill annual_bill(const EnergyLedger& ledger, const Tariff& tariff, std::span<const double> minute_import_w) {
  if (minute_import_w.size() != kMinutesPerYear) return annual_bill(ledger, tariff);
  std::vector<double> folded(kMinutesPerDay, 0.0);
  for (std::size_t i = 0; i < minute_import_w.size(); ++i) folded[i % kMinutesPerDay] += minute_import_w[i] / 60.0;
  Bill bill;
  bill.import_cost = price_by_time_of_day(folded, tariff) + fixed_term(tariff);
  bill.export_revenue = ledger.export_wh / 1000.0 * tariff.export_price;
  return bill;
}

Bill counterfactual_bill(const EnergyLedger& ledger, const Tariff& tariff) {
  Bill bill;
  if (ledger.load_by_minute_of_day.size() == kMinutesPerDay) {
    bill.import_cost = price_by_time_of_day(ledger.load_by_minute_of_day, tariff);
  } else {
    bill.import_cost = ledger.load_wh / 1000.0 * average_price(tariff);
    bill.fallback = true;
  }
  bill.import_cost += fixed_term(tariff);
  return bill;
}

CashflowSchedule build_cashflows(std::span<const EnergyLedger> ledgers, const Tariff& tariff,
                                 const CostTable& cost, const Rates& rates, SystemConfig config) {
  tariff.validate();
  cost.validate();
  rates.validate();
  if (ledgers.empty()) throw Error(ErrorCode::kRange, "build_cashflows needs at least one ledger");

  CashflowSchedule s;
  s.investment = total_investment(cost, config);
  s.flows.push_back(-s.investment);
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    const int y = static_cast<int>(i) + 1;
    const Bill actual = annual_bill(ledgers[i], tariff);
    const Bill baseline = counterfactual_bill(ledgers[i], tariff);
    s.bill_fallback = s.bill_fallback || actual.fallback || baseline.fallback;

    const double energy_factor = std::pow(1.0 + rates.energy_escalation, y - 1);
    const double cost_factor = std::pow(1.0 + rates.inflation, y - 1);
    const double saving = (baseline.import_cost - actual.import_cost + actual.export_revenue) * energy_factor;
    const double opex = cost.opex(config) * cost_factor;
    const double repl = y == rates.replacement_year ? cost.replacement(config) * cost_factor : 0.0;

    s.savings.push_back(saving);
    s.opex.push_back(opex);
    s.replacement.push_back(repl);
    s.flows.push_back(saving - opex - repl);
  }
  return s;
}

double npv(std::span<const double> flows, double discount) {
  if (!(discount > -1.0)) throw Error(ErrorCode::kRange, "discount rate must be > -1");
  double total = 0.0;
  double factor = 1.0;
  for (double f : flows) {
    total += f / factor;
    factor *= 1.0 + discount;
  }
  return total;
}

double irr(std::span<const double> flows) {
  if (flows.empty()) throw Error(ErrorCode::kRange, "irr needs at least one flow");
  bool pos = false;
  bool neg = false;
  for (double f : flows) {
    pos = pos || f > 0.0;
    neg = neg || f < 0.0;
  }
  if (!(pos && neg)) throw Error(ErrorCode::kNoSolution, "irr: cash flows never change sign");

  // A negative final flow (replacement) can give npv the same sign at both
  // ends of the interval, so scan for the highest bracketed root.
  constexpr int kGrid = 4000;
  const double u_lo = std::log(0.01);
  const double u_hi = std::log(11.0);
  double hi = 10.0;
  double f_hi = npv(flows, hi);
  if (f_hi == 0.0) return hi;
  double lo = hi;
  double f_lo = f_hi;
  bool bracketed = false;
  for (int k = kGrid - 1; k >= 0 && !bracketed; --k) {
    lo = k == 0 ? -0.99 : std::expm1(u_lo + (u_hi - u_lo) * k / kGrid);
    f_lo = npv(flows, lo);
    if (f_lo == 0.0) return lo;
    if ((f_lo > 0.0) != (f_hi > 0.0)) {
      bracketed = true;
    } else {
      hi = lo;
      f_hi = f_lo;
    }
  }
  if (!bracketed) throw Error(ErrorCode::kNoSolution, "irr: no root bracketed in (-0.99, 10]");

  double mid = 0.5 * (lo + hi);
  for (int i = 0; i < 200; ++i) {
    mid = 0.5 * (lo + hi);
    const double f_mid = npv(flows, mid);
    if (f_mid == 0.0 || mid == lo || mid == hi) break;
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  if (!(std::abs(npv(flows, mid)) < 1e-6)) {
    throw Error(ErrorCode::kNoSolution, "irr: bisection did not reach |npv| < 1e-6");
  }
  return mid;
}

std::optional<double> spb(std::span<const double> flows) {
  if (flows.empty()) return std::nullopt;
  double cumulative = flows[0];
  if (cumulative >= 0.0) return 0.0;
  for (std::size_t y = 1; y < flows.size(); ++y) {
    const double next = cumulative + flows[y];
    if (next >= 0.0) return static_cast<double>(y - 1) + (-cumulative) / flows[y];
    cumulative = next;
  }
  return std::nullopt;
}

double lcoe(std::span<const double> costs, std::span<const double> delivered_kwh, double discount) {
  if (costs.size() != delivered_kwh.size() + 1) {
    throw Error(ErrorCode::kRange, "lcoe: costs need one more entry (year 0) than delivered energy");
  }
  const double tlcc = npv(costs, discount);
  double energy = 0.0;
  double factor = 1.0;
  for (double e : delivered_kwh) {
    factor *= 1.0 + discount;
    energy += e / factor;
  }
  if (!(energy > 0.0)) throw Error(ErrorCode::kUndefined, "lcoe: no energy delivered");
  return tlcc / energy;
}

EconomicReport evaluate_economics(std::span<const EnergyLedger> ledgers, const Tariff& tariff,
                                  const CostTable& cost, const Rates& rates, SystemConfig config) {
  EconomicReport r;
  r.config = config;
  r.cashflows = build_cashflows(ledgers, tariff, cost, rates, config);
  r.npv = npv(r.cashflows.flows, rates.discount);

  std::vector<double> costs{r.cashflows.investment};
  std::vector<double> energy;
  for (std::size_t i = 0; i < ledgers.size(); ++i) {
    costs.push_back(r.cashflows.opex[i] + r.cashflows.replacement[i]);
    energy.push_back(ledgers[i].delivered_wh() / 1000.0);
  }
  try {
    r.lcoe = lcoe(costs, energy, rates.discount);
  } catch (const Error& e) {
    r.notes.emplace_back(e.what());
  }
  try {
    r.irr = irr(r.cashflows.flows);
  } catch (const Error& e) {
    r.notes.emplace_back(e.what());
  }
  r.spb = spb(r.cashflows.flows);
  if (!r.spb) r.notes.emplace_back("spb: cumulative cash flow stays negative over the horizon");
  if (r.cashflows.bill_fallback) r.notes.emplace_back("bill priced at the duty-weighted average tariff");
  return r;
}

}  // namespace hess
