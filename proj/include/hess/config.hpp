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

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hess/study.hpp"
#include "hess/sweep.hpp"

namespace hess {

// Where a profile comes from. No path selects the bundled synthetic series.
struct ProfileSource {
  std::optional<std::filesystem::path> path;
  int step_s = 60;
};

struct SweepSettings {
  // One use case, or all three ("all" in the document).
  std::vector<UseCase> use_cases{UseCase::kAllYearVariable};
  SecondaryKpi secondary = SecondaryKpi::kObu;
  double tie_tolerance = 1e-4;
  bool resume = true;
};

/// Fully resolved run configuration. Built from a JSON document laid over the
/// defaults; see default_config_json() for the schema.
struct RunConfig {
  ProfileSource pv;
  ProfileSource load;
  std::vector<PolicyId> scenarios{PolicyId::kFixedSplit, PolicyId::kPsocSplit, PolicyId::kBandSplit,
                                  PolicyId::kSingleVrfb, PolicyId::kSingleLib};
  int years = kHorizonYears;
  ScalingPolicy scaling;
  PerTech<BatterySpec> batteries{{BatterySpec::vrfb_default(), BatterySpec::lib_default()}};
  AgingParams aging;
  ScenarioPolicy policy;
  KpiOptions kpi;
  Tariff tariff;
  CostTable costs;
  Rates rates;
  SweepSettings sweep;
  std::filesystem::path output_dir = "hessim-out";
  unsigned workers = 0;  // 0 = one per hardware thread
  bool trace = false;
};

struct Diagnostic {
  std::string path;  // JSON pointer into the document, "" for the whole file
  std::string message;
  bool operator==(const Diagnostic&) const = default;
};

/// The complete default document, pretty-printed. Every key it contains is a
/// valid override key; nothing else is.
std::string default_config_json();

/// Dry-run check of a JSON document: syntax, unknown keys, types, ranges and
/// the existence of referenced files. Relative profile paths resolve against
/// `base_dir`. Never throws and never loads profile data.
std::vector<Diagnostic> validate_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Throws Error(kConfig) unless `json_text` is a JSON object (or empty).
void check_config_syntax(std::string_view json_text);

/// Parses and validates. Throws Error(kConfig) carrying the first diagnostic.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir = {});

/// Reads a file and parses it with its directory as the base.
/// Throws Error(kIo) when the file cannot be read.
std::string read_text_file(const std::filesystem::path& path);

/// Sets `value_json` at `pointer` in `json_text`, creating parent objects as
/// needed. Throws Error(kConfig) for malformed input.
std::string set_config_value(std::string_view json_text, std::string_view pointer, std::string_view value_json);

/// Canonical JSON of the resolved configuration (sorted keys, no whitespace)
/// and its 64-bit FNV-1a hash as 16 hex digits.
std::string canonical_config_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

/// Loads the profiles and assembles the immutable study inputs.
/// Throws the profile reader's errors.
StudyInputs build_study(const RunConfig& config);

}  // namespace hess
