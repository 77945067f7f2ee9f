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

#include "hess/dispatch.hpp"
#include "hess/economics.hpp"
#include "hess/kpi.hpp"

namespace hess {

// Everything needed to evaluate one scenario. Immutable once built, so one
// instance can be shared read-only by parallel workers.
struct StudyInputs {
  SimulationInputs sim;
  ScenarioPolicy policy_template;  // alpha/beta, band, beta curves
  KpiOptions kpi;
  Tariff tariff;
  CostTable costs;
  Rates rates;

  ScenarioPolicy policy(PolicyId id) const;
};

struct ScenarioOutcome {
  ScenarioPolicy policy;
  HorizonResult horizon;
  KpiReport kpis;
  EconomicReport economics;
};

ScenarioOutcome evaluate_scenario(const ScenarioPolicy& policy, const StudyInputs& inputs,
                                  const StepObserver& observer = {});

}  // namespace hess
