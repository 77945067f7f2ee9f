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

#include <cstdio>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hess/config.hpp"
#include "hess/study.hpp"
#include "hess/sweep.hpp"

namespace hess {

inline constexpr std::string_view kLedgerFormatVersion = "ledger-1";

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

/// One row per simulated year, energies in Wh. `loss_wh` is the battery
/// conversion loss of both technologies.
std::string ledger_csv(std::span<const EnergyLedger> ledgers);

/// Annual and horizon KPIs of each scenario, tagged with the KPI formula
/// version. Renders to one CSV row per scenario and period.
std::string kpi_json(std::span<const ScenarioOutcome> outcomes, const KpiOptions& options);

/// Headline economic metrics and yearly cash flows of each scenario. Renders
/// to a CSV with one row per metric and one column per scenario.
std::string economics_json(std::span<const ScenarioOutcome> outcomes);

std::string sweep_csv_header();
std::string sweep_csv_row(const SweepResult& r);
std::string sweep_csv(std::span<const SweepResult> results);

/// Reads rows written by sweep_csv_row back into results for `use_case`.
/// Rows of another use case, unknown ranges and an unterminated last line are
/// skipped, so a checkpoint cut short by a crash still loads.
std::vector<SweepResult> parse_sweep_csv(std::string_view text, UseCase use_case);

std::string ranking_json(UseCase use_case, const Ranking& ranking, SecondaryKpi secondary, double tolerance);

/// Best value and every case achieving it, per KPI and use case.
std::string sweep_summary_json(std::span<const std::pair<UseCase, Ranking>> rankings, SecondaryKpi secondary,
                               double tolerance);

struct ManifestInfo {
  std::string command;
  std::vector<std::string> scenarios;
  std::vector<std::string> files;  // relative to the output directory
  std::string started_utc;
  double wall_time_s = 0.0;
};

/// Run manifest. Everything except the "timestamp" object is a pure function
/// of the configuration.
std::string manifest_json(const RunConfig& config, const ManifestInfo& info);

/// Renders a JSON report (kpi, economics, ranking or sweep_summary) as CSV.
/// Throws Error(kParse) for malformed input or an unsupported kind.
std::string render_csv(std::string_view json_text);

/// Per-minute trace writer for StepObserver. Large: about 150 bytes per
/// simulated minute.
class TraceWriter {
 public:
  explicit TraceWriter(const std::filesystem::path& path);
  ~TraceWriter();
  TraceWriter(const TraceWriter&) = delete;
  TraceWriter& operator=(const TraceWriter&) = delete;

  void write(int year, std::size_t minute, const StepRecord& r, const PerTech<BatteryState>& states);
  // Throws Error(kIo) when any write failed.
  void close();

 private:
  std::FILE* file_ = nullptr;
  std::filesystem::path path_;
};

/// Writes `text` to `path` through a temporary file and a rename.
/// Throws Error(kIo).
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

}  // namespace hess
