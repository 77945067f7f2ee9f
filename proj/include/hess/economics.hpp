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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hess/dispatch.hpp"

namespace hess {

enum class SystemConfig { kHess, kVrfbOnly, kLibOnly };

std::string_view to_string(SystemConfig c) noexcept;
SystemConfig system_for(PolicyId id) noexcept;

inline constexpr std::string_view kEconomicsFormulaVersion = "econ-1";

// Two-period time-of-use tariff plus a fixed daily term. Prices include VAT.
struct Tariff {
  double fixed_daily = 0.2796;     // EUR/day
  double price_peak = 0.2116;      // EUR/kWh
  double price_offpeak = 0.1145;   // EUR/kWh
  int offpeak_start_minute = 22 * 60;  // minute of day, window may wrap midnight
  int offpeak_end_minute = 8 * 60;     // exclusive
  double export_price = 0.0;       // EUR/kWh

  bool is_offpeak(int minute_of_day) const noexcept;
  double offpeak_fraction() const noexcept;
  void validate() const;
};

struct CostTable {
  double module_price_per_wp = 0.45;
  double pv_wp = 9750.0;
  double inverter_pv_a = 2432.0;
  double inverter_pv_b = 1483.0;
  double lib = 4527.0;
  double lib_inverter = 2125.0;
  double vrfb = 17252.0;
  double vrfb_inverter = 1159.0;
  int vrfb_inverter_count = 3;
  double cabling_hess = 2250.0;
  double cabling_single = 750.0;
  double opex_per_year = 500.0;
  // The O&M line is the VRFB tank inert gas; a LIB-only system does not carry it.
  double opex_lib_only = 0.0;

  double pv_modules() const noexcept { return module_price_per_wp * pv_wp; }
  double vrfb_inverters() const noexcept { return vrfb_inverter * vrfb_inverter_count; }
  double opex(SystemConfig config) const noexcept;
  double replacement(SystemConfig config) const noexcept;
  void validate() const;
};

struct Rates {
  double discount = 0.08;
  double inflation = 0.013;
  double energy_escalation = 0.016;
  int horizon = 15;
  int replacement_year = 15;
  void validate() const;
};

double total_investment(const CostTable& cost, SystemConfig config);

struct Bill {
  double import_cost = 0.0;     // EUR, fixed term included
  double export_revenue = 0.0;  // EUR
  bool fallback = false;        // priced at the duty-weighted average
};

/// Prices a year of grid exchange. Uses the ledger's minute-of-day import
/// profile when present; otherwise prices the annual total at the
/// duty-weighted average and sets `fallback`.
Bill annual_bill(const EnergyLedger& ledger, const Tariff& tariff);

/// Same, with a full-year per-minute import trace in W.
Bill annual_bill(const EnergyLedger& ledger, const Tariff& tariff, std::span<const double> minute_import_w);

/// Bill for the same building load with no PV or storage.
Bill counterfactual_bill(const EnergyLedger& ledger, const Tariff& tariff);

struct CashflowSchedule {
  double investment = 0.0;
  std::vector<double> flows;        // [0] = -investment, then one per year
  std::vector<double> savings;      // per year, escalated
  std::vector<double> opex;         // per year, inflated
  std::vector<double> replacement;  // per year, inflated
  bool bill_fallback = false;
};

/// Yearly net flow = escalated (avoided import cost + export revenue) minus
/// inflated O&M, minus battery replacement in the replacement year.
CashflowSchedule build_cashflows(std::span<const EnergyLedger> ledgers, const Tariff& tariff,
                                 const CostTable& cost, const Rates& rates, SystemConfig config);

double npv(std::span<const double> flows, double discount);

/// Highest root of npv on (-0.99, 10], located by a grid scan and refined by
/// bisection. Throws Error(kNoSolution) when no bracket exists.
double irr(std::span<const double> flows);

/// First year the cumulative flow turns non-negative, interpolated within the
/// year. nullopt if it never does.
std::optional<double> spb(std::span<const double> flows);

/// Levelized cost: PV of `costs` (year 0..N, positive) over PV of
/// `delivered_kwh` (years 1..N). Throws Error(kUndefined) for zero energy.
double lcoe(std::span<const double> costs, std::span<const double> delivered_kwh, double discount);

struct EconomicReport {
  SystemConfig config = SystemConfig::kHess;
  CashflowSchedule cashflows;
  double npv = 0.0;
  std::optional<double> lcoe;
  std::optional<double> irr;
  std::optional<double> spb;
  std::vector<std::string> notes;
};

EconomicReport evaluate_economics(std::span<const EnergyLedger> ledgers, const Tariff& tariff,
                                  const CostTable& cost, const Rates& rates, SystemConfig config);

}  // namespace hess
