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

#include "hess/study.hpp"

namespace hess {

ScenarioPolicy StudyInputs::policy(PolicyId id) const {
  ScenarioPolicy p = policy_template;
  p.id = id;
  if (id != PolicyId::kSocSweepCase) p.seasonal.reset();
  return p;
}

ScenarioOutcome evaluate_scenario(const ScenarioPolicy& policy, const StudyInputs& inputs,
                                  const StepObserver& observer) {
  ScenarioOutcome out;
  out.policy = policy;
  out.horizon = simulate_horizon(policy, inputs.sim, observer);
  out.kpis = compute_kpis(out.horizon.ledgers, inputs.kpi);
  out.economics = evaluate_economics(out.horizon.ledgers, inputs.tariff, inputs.costs, inputs.rates,
                                     system_for(policy.id));
  return out;
}

}  // namespace hess
