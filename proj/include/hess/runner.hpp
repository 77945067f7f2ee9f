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

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "hess/config.hpp"
#include "hess/study.hpp"
#include "hess/sweep.hpp"

namespace hess {

struct RunReport {
  std::vector<ScenarioOutcome> outcomes;  // config.scenarios order
  std::vector<std::string> files;         // relative to the output directory
};

/// Simulates every configured scenario, scenarios in parallel, and writes
/// per-scenario ledger CSVs, kpi.{json,csv}, economics.{json,csv}, optional
/// traces and manifest.json into config.output_dir.
RunReport run(const RunConfig& config);

struct SweepReport {
  UseCase use_case = UseCase::kAllYearVariable;
  std::vector<SweepResult> results;  // case-index order
  Ranking ranking;
  std::size_t resumed = 0;  // cases restored from the checkpoint
  std::vector<std::string> files;
};

struct SweepRun {
  std::vector<SweepReport> use_cases;  // configured order
  std::vector<std::string> files;      // relative to the output directory
};

/// Runs each configured use case over every admissible SOC-range case and
/// writes per-use-case CSV and ranking files plus sweep_summary.json.
/// Finished cases are appended to a checkpoint as they complete; with
/// `sweep.resume` a rerun skips the cases already there.
SweepRun sweep(const RunConfig& config);

unsigned effective_workers(unsigned requested, std::size_t jobs);

}  // namespace hess
