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


#include "hess/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <exception>
#include <fstream>
#include <memory>
#include <mutex>
#include <thread>

#include "hess/error.hpp"
#include "hess/reports.hpp"

namespace hess {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIo, "cannot create " + dir.string() + ": " + ec.message());
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <class Job>
void parallel_for(std::size_t count, unsigned workers, Job job) {
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

unsigned effective_workers(unsigned requested, std::size_t jobs) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(n, jobs)));
}

RunReport run(const RunConfig& config) {
  const Stopwatch clock;
  const std::string started = utc_now();
  const std::filesystem::path& out = config.output_dir;
  ensure_dir(out);
  const StudyInputs inputs = build_study(config);

  RunReport report;
  report.outcomes.resize(config.scenarios.size());
  parallel_for(config.scenarios.size(), effective_workers(config.workers, config.scenarios.size()),
               [&](std::size_t i) {
                 const ScenarioPolicy policy = inputs.policy(config.scenarios[i]);
                 const std::string id(to_string(policy.id));
                 if (config.trace) {
                   TraceWriter trace(out / ("trace_" + id + ".csv"));
                   report.outcomes[i] = evaluate_scenario(
                       policy, inputs, [&](int y, std::size_t m, const StepRecord& r, const PerTech<BatteryState>& s) {
                         trace.write(y, m, r, s);
                       });
                   trace.close();
                 } else {
                   report.outcomes[i] = evaluate_scenario(policy, inputs);
                 }
               });

  ManifestInfo info;
  info.command = "run";
  for (const auto& o : report.outcomes) {
    const std::string id(to_string(o.policy.id));
    info.scenarios.push_back(id);
    const std::string name = "ledger_" + id + ".csv";
    write_file_atomic(out / name, ledger_csv(o.horizon.ledgers));
    report.files.push_back(name);
    if (config.trace) report.files.push_back("trace_" + id + ".csv");
  }
  const std::string kpi = kpi_json(report.outcomes, config.kpi);
  const std::string econ = economics_json(report.outcomes);
  write_file_atomic(out / "kpi.json", kpi);
  write_file_atomic(out / "kpi.csv", render_csv(kpi));
  write_file_atomic(out / "economics.json", econ);
  write_file_atomic(out / "economics.csv", render_csv(econ));
  for (const char* f : {"kpi.json", "kpi.csv", "economics.json", "economics.csv"}) report.files.emplace_back(f);

  info.files = report.files;
  info.started_utc = started;
  info.wall_time_s = clock.seconds();
  write_file_atomic(out / "manifest.json", manifest_json(config, info));
  report.files.emplace_back("manifest.json");
  return report;
}

namespace {

SweepReport sweep_one(const RunConfig& config, const StudyInputs& inputs, UseCase uc) {
  const std::filesystem::path& out = config.output_dir;
  const std::string stem = "sweep_" + std::string(to_string(uc));
  const std::filesystem::path checkpoint = out / (stem + ".partial.csv");
  // The checkpoint belongs to one configuration; a stale one is discarded.
  const std::string tag = "# config " + config_hash(config) + "\n";

  SweepOptions options;
  options.workers = effective_workers(config.workers, enumerate_cases(uc).size());
  if (config.sweep.resume && std::filesystem::exists(checkpoint)) {
    const std::string text = read_text_file(checkpoint);
    if (text.rfind(tag, 0) == 0) options.completed = parse_sweep_csv(text, uc);
  }
  {
    // Rewrite the checkpoint with the rows being kept, then append new ones.
    std::string head = tag;
    for (const auto& r : options.completed) head += sweep_csv_row(r);
    write_file_atomic(checkpoint, head);
  }
  auto log = std::make_shared<std::ofstream>(checkpoint, std::ios::binary | std::ios::app);
  if (!*log) throw Error(ErrorCode::kIo, "cannot append to " + checkpoint.string());
  options.on_result = [log](const SweepResult& r) {
    *log << sweep_csv_row(r);
    log->flush();
  };

  SweepReport report;
  report.use_case = uc;
  report.resumed = options.completed.size();
  report.results = run_sweep(uc, inputs, options);
  log->close();
  report.ranking = rank(report.results, config.sweep.secondary, config.sweep.tie_tolerance);

  const std::string ranking = ranking_json(uc, report.ranking, config.sweep.secondary, config.sweep.tie_tolerance);
  write_file_atomic(out / (stem + ".csv"), sweep_csv(report.results));
  write_file_atomic(out / (stem + "_ranking.json"), ranking);
  write_file_atomic(out / (stem + "_ranking.csv"), render_csv(ranking));
  report.files = {stem + ".csv", stem + "_ranking.json", stem + "_ranking.csv"};
  std::filesystem::remove(checkpoint);
  return report;
}

}  // namespace

SweepRun sweep(const RunConfig& config) {
  const Stopwatch clock;
  const std::string started = utc_now();
  const std::filesystem::path& out = config.output_dir;
  ensure_dir(out);
  const StudyInputs inputs = build_study(config);

  SweepRun run;
  std::vector<std::pair<UseCase, Ranking>> rankings;
  ManifestInfo info;
  info.command = "sweep";
  for (UseCase uc : config.sweep.use_cases) {
    SweepReport r = sweep_one(config, inputs, uc);
    run.files.insert(run.files.end(), r.files.begin(), r.files.end());
    rankings.emplace_back(uc, r.ranking);
    info.scenarios.emplace_back(to_string(uc));
    run.use_cases.push_back(std::move(r));
  }
  write_file_atomic(out / "sweep_summary.json",
                    sweep_summary_json(rankings, config.sweep.secondary, config.sweep.tie_tolerance));
  run.files.emplace_back("sweep_summary.json");

  info.files = run.files;
  info.started_utc = started;
  info.wall_time_s = clock.seconds();
  write_file_atomic(out / "sweep_manifest.json", manifest_json(config, info));
  run.files.emplace_back("sweep_manifest.json");
  return run;
}

}  // namespace hess
