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

#include "hess/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "hess/error.hpp"

namespace hess {

std::string_view to_string(UseCase uc) noexcept {
  switch (uc) {
    case UseCase::kAllYearVariable: return "uc1";
    case UseCase::kWinterVariableSummerFixed: return "uc2";
    case UseCase::kWinterFixedSummerVariable: return "uc3";
  }
  return "unknown";
}

UseCase parse_use_case(std::string_view text) {
  if (text == "uc1" || text == "uc1_all_year_variable") return UseCase::kAllYearVariable;
  if (text == "uc2" || text == "uc2_winter_variable_summer_fixed") return UseCase::kWinterVariableSummerFixed;
  if (text == "uc3" || text == "uc3_winter_fixed_summer_variable") return UseCase::kWinterFixedSummerVariable;
  throw Error(ErrorCode::kConfig, "unknown use case '" + std::string(text) + "'");
}

std::string_view to_string(SecondaryKpi k) noexcept {
  return k == SecondaryKpi::kObu ? "obu" : "lcoe";
}

SecondaryKpi parse_secondary_kpi(std::string_view text) {
  if (text == "obu") return SecondaryKpi::kObu;
  if (text == "lcoe") return SecondaryKpi::kLcoe;
  throw Error(ErrorCode::kConfig, "unknown secondary KPI '" + std::string(text) + "'");
}

std::vector<SocRange> admissible_ranges(Tech tech) {
  const std::span<const int> mins = tech == Tech::kLib ? std::span<const int>(kLibMinGrid) : kVrfbMinGrid;
  const std::span<const int> maxs = tech == Tech::kLib ? std::span<const int>(kLibMaxGrid) : kVrfbMaxGrid;
  std::vector<SocRange> out;
  for (int lo : mins) {
    for (int hi : maxs) {
      if (hi - lo >= kMinDepthOfDischargePct) out.push_back({tech, lo, hi});
    }
  }
  return out;
}

std::vector<SweepCase> enumerate_cases(UseCase use_case) {
  const auto vrfb = admissible_ranges(Tech::kVrfb);
  const auto lib = admissible_ranges(Tech::kLib);
  std::vector<SweepCase> cases;
  cases.reserve(vrfb.size() * lib.size());
  for (const auto& v : vrfb) {
    for (const auto& l : lib) cases.push_back({cases.size(), use_case, v, l});
  }
  return cases;
}

ScenarioPolicy policy_for_case(const SweepCase& c, const StudyInputs& inputs) {
  ScenarioPolicy p = inputs.policy(PolicyId::kSocSweepCase);
  PerTech<SeasonalWindows> w;
  for (Tech t : kTechs) {
    const SocWindow configured{inputs.sim.specs[t].soc_min, inputs.sim.specs[t].soc_max};
    const SocWindow variable = (t == Tech::kVrfb ? c.vrfb : c.lib).window();
    switch (c.use_case) {
      case UseCase::kAllYearVariable: w[t] = {variable, variable}; break;
      case UseCase::kWinterVariableSummerFixed: w[t] = {configured, variable}; break;
      case UseCase::kWinterFixedSummerVariable: w[t] = {variable, configured}; break;
    }
  }
  p.seasonal = w;
  return p;
}

namespace {

SweepResult summarize(const SweepCase& c, const ScenarioOutcome& o) {
  SweepResult r;
  r.sweep_case = c;
  r.scr = o.kpis.scr;
  r.lcoe = o.economics.lcoe;
  r.obu = o.kpis.obu;
  r.npv = o.economics.npv;
  r.kpis = o.kpis;
  return r;
}

}  // namespace

std::vector<SweepResult> run_sweep(UseCase use_case, const StudyInputs& inputs, const SweepOptions& options) {
  const auto cases = enumerate_cases(use_case);
  std::vector<std::optional<SweepResult>> slots(cases.size());
  for (const auto& done : options.completed) {
    const auto& c = done.sweep_case;
    if (c.index < cases.size() && cases[c.index] == c) slots[c.index] = done;
  }

  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    if (!slots[i]) todo.push_back(i);
  }

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;

  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t k = next.fetch_add(1);
      if (k >= todo.size()) return;
      const SweepCase& c = cases[todo[k]];
      try {
        SweepResult r = summarize(c, evaluate_scenario(policy_for_case(c, inputs), inputs));
        std::lock_guard lock(mu);
        if (options.on_result) options.on_result(r);
        slots[c.index] = std::move(r);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const unsigned n = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(todo.size())));
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<SweepResult> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

namespace {

double secondary_key(const SweepResult& r, SecondaryKpi k) {
  if (k == SecondaryKpi::kLcoe) return r.lcoe.value_or(std::numeric_limits<double>::infinity());
  return r.obu[Tech::kVrfb] + r.obu[Tech::kLib];
}

template <class Get>
KpiOptimum optimum(std::span<const SweepResult> results, std::string name, bool maximize, double tol, Get get) {
  KpiOptimum o;
  o.kpi = std::move(name);
  o.best = maximize ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    const double v = get(r);
    if (maximize ? v > o.best : v < o.best) o.best = v;
  }
  for (const auto& r : results) {
    if (std::abs(get(r) - o.best) <= tol) o.cases.push_back(r.sweep_case);
  }
  return o;
}

}  // namespace

Ranking rank(std::span<const SweepResult> results, SecondaryKpi secondary, double tolerance) {
  if (results.empty()) throw Error(ErrorCode::kRange, "rank needs at least one result");

  Ranking out;
  out.ordered.assign(results.begin(), results.end());
  std::stable_sort(out.ordered.begin(), out.ordered.end(),
                   [](const SweepResult& a, const SweepResult& b) { return a.scr > b.scr; });

  auto group_begin = out.ordered.begin();
  while (group_begin != out.ordered.end()) {
    const double leader = group_begin->scr;
    auto group_end = std::find_if(group_begin, out.ordered.end(),
                                  [&](const SweepResult& r) { return leader - r.scr > tolerance; });
    std::stable_sort(group_begin, group_end, [secondary](const SweepResult& a, const SweepResult& b) {
      return secondary_key(a, secondary) < secondary_key(b, secondary);
    });
    group_begin = group_end;
  }

  const double inf = std::numeric_limits<double>::infinity();
  out.optima.push_back(optimum(results, "scr", true, tolerance, [](const SweepResult& r) { return r.scr; }));
  out.optima.push_back(
      optimum(results, "lcoe", false, tolerance, [inf](const SweepResult& r) { return r.lcoe.value_or(inf); }));
  out.optima.push_back(
      optimum(results, "obu_vrfb", false, tolerance, [](const SweepResult& r) { return r.obu[Tech::kVrfb]; }));
  out.optima.push_back(
      optimum(results, "obu_lib", false, tolerance, [](const SweepResult& r) { return r.obu[Tech::kLib]; }));
  return out;
}

}  // namespace hess
